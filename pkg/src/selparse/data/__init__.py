"""Paths to the bundled hierarchy, lexicon, declarations and corpus."""

from pathlib import Path

_ROOT = Path(__file__).parent

HIERARCHY = _ROOT / "figure1.sorts"
LEXICON = _ROOT / "corpus.lex"
DECLS = _ROOT / "figure2.psoa"
CORPUS = _ROOT / "paper.corpus"
