"""Regenerate the shipped synthetic corpus fixture.

Run from the repository root:

    python3 tests/make_fixtures.py

The corpus is a 50-record sports-results world over a small closed
vocabulary, so the toy model can actually learn it. Every record carries
five rule-compliant references; post-processing removes the deliberately
shortest fifth question, leaving exactly four.
"""

from __future__ import annotations

import json
from pathlib import Path

TEAMS = ["alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel", "kilo", "lima"]
SPORTS = ["cup", "bowl", "series", "open", "derby"]
CITIES = ["lisbon", "madrid", "oslo", "cairo", "quito"]


def build_record(i: int) -> dict:
    team = TEAMS[i % len(TEAMS)]
    rival = TEAMS[(i + 3) % len(TEAMS)]
    sport = SPORTS[i % len(SPORTS)]
    city = CITIES[(i + i // 10) % len(CITIES)]
    summary = f"team {team} beat team {rival} in the {sport} final at {city}"
    references = [
        {
            "question": f"which team won the {sport} final at {city} ?",
            "answer": f"team {team}",
        },
        {
            "question": f"which team lost the {sport} final at {city} ?",
            "answer": f"team {rival}",
        },
        {
            "question": f"where was the {sport} final between {team} and {rival} played ?",
            "answer": f"{city}",
        },
        {
            "question": f"what event did team {team} win at {city} ?",
            "answer": f"the {sport} final",
        },
        # Deliberately the shortest question; post-processing removes it.
        {
            "question": "who won ?",
            "answer": f"team {team}",
        },
    ]
    return {
        "id": f"rec{i:03d}",
        "summary": summary,
        "style": "NewsQuizQA",
        "references": references,
    }


def main() -> None:
    out_dir = Path(__file__).parent / "fixtures"
    out_dir.mkdir(exist_ok=True)
    path = out_dir / "corpus50.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(50):
            fh.write(json.dumps(build_record(i)) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
