"""matrad: exact combinatorics of permutahedra, bipartition matrices,
biassociahedra KK and bimultiplihedra JJ."""

__version__ = "0.1.0"
