"""Generic ranks, maximum-rank bounds and explicit rank decompositions
with respect to Veronese, Segre, Grassmann and power-of-forms varieties."""

__version__ = "0.1.0"
