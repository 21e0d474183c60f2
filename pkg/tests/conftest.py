import sys
from pathlib import Path

# Make tests/oracles.py and fixture helpers importable as plain modules.
sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"
