"""Shared cached builders so each instance is enumerated/built once per run."""

from functools import lru_cache


@lru_cache(maxsize=None)
def get_graph(tag, q0, D):
    from dualpolar.geometry import build_space, dual_polar_graph

    return dual_polar_graph(build_space(tag, q0, D))


@lru_cache(maxsize=None)
def get_profile(tag, q0, D):
    from dualpolar.drg import profile_from_graph

    return profile_from_graph(get_graph(tag, q0, D))


@lru_cache(maxsize=None)
def get_partition(tag, q0, D):
    from dualpolar.drg import clique_partition

    return clique_partition(get_graph(tag, q0, D))


@lru_cache(maxsize=None)
def get_wmodule_concrete(tag, q0, D):
    from dualpolar.drg import build_w_module_concrete

    return build_w_module_concrete(get_partition(tag, q0, D))


@lru_cache(maxsize=None)
def get_wmodule_formal(e4, D):
    from fractions import Fraction

    from dualpolar.drg import build_w_module_formal

    return build_w_module_formal(Fraction(e4, 4), D)
