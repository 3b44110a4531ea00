"""Call-by-value lambda calculus: reduction, Böhm trees, resource calculus, Taylor expansion."""

import sys

# reducts of recursive terms get deep; the recursive helpers need headroom
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__version__ = "0.1.0"
