"""Constructive geometric Ramsey toolkit.

Extracts certified monochromatic non-crossing ladders and pathwidth-2
outerplanar triangulations from 2-coloured complete geometric graphs, and
provides exhaustive ground truth for small convex Ramsey values.
"""

__version__ = "0.1.0"
