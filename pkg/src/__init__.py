"""
LDD challenge-set toolkit.
Extracts long-distance-dependency challenge sets from parsed, word-aligned bitext
and scores MT output on them.
"""

__version__ = "1.0.0"
TOOL_NAME = "ldd-challenge-sets"
