"""Arrangements of pieces on a sphere: validity, counting, moves and enumeration."""

from .tree import *  # noqa: F401,F403
from .tree import __all__ as _tree_all
from .moves import *  # noqa: F401,F403
from .moves import __all__ as _moves_all
from .enumerate import *  # noqa: F401,F403
from .enumerate import __all__ as _enum_all

__all__ = [*_tree_all, *_moves_all, *_enum_all]
