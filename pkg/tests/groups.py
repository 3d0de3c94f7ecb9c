"""Shared, cached groups for the test suite."""

import functools

from crford.numfield import RATIONALS
from crford.triangle import TriangleParams, accidental_group, build_triangle_group, standard_335


@functools.lru_cache(maxsize=None)
def original_335():
    return accidental_group(3, 3, 5)


@functools.lru_cache(maxsize=None)
def standard():
    return standard_335()


@functools.lru_cache(maxsize=None)
def fuchsian_335():
    return build_triangle_group(TriangleParams(3, 3, 5, RATIONALS(1)))
