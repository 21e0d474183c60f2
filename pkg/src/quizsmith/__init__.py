"""Desk-scale toolkit for quiz-style multiple-choice question generation."""

__version__ = "0.1.0"
