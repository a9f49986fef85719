"""Shared helpers for the test suite."""

from ttrspec import RootKind


def zeros_of(roots):
    return [r for r in roots if r.classification is RootKind.ZERO]


def pole_crossings_of(roots):
    return [r for r in roots if r.classification is RootKind.POLE_CROSSING]
