"""Executable constructions for minimal subshifts with prescribed complexity.

The package materialises two inductive word constructions at desk scale
(a superlinear-complexity family carrying many distinguishable measure
branches, and a loud/quiet family with controlled Hamming-ball covering
statistics), together with the general tooling both need: exact block
complexity of concatenation subshifts, balanced Hamming-separated
codebooks, empirical window measures, covering numbers, and
number-theoretic sequence ingestion.

Everything that certifies an inequality runs on exact integers and
rationals; floats appear only in descriptive reports.
"""

from shiftlab.words import Alphabet, Word, concat, hamming, occurrence_frequency, rotation_distinct, subwords

__all__ = [
    "Alphabet",
    "Word",
    "concat",
    "hamming",
    "occurrence_frequency",
    "rotation_distinct",
    "subwords",
]

__version__ = "0.1.0"
