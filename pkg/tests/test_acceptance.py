"""Acceptance gate: the ten headline checks, each printed as one
PASS/FAIL line with its runtime.

Every check is exact rational arithmetic; there are no tolerances.  The
three checks with stated runtime budgets assert them here as well.
"""

import pytest

from nahilb.verify import DEFAULT_SEED, run_checks


def run_criterion(capsys, name, budget=None):
    result = run_checks([name], seed=DEFAULT_SEED)[0]
    state = "PASS" if result.ok else "FAIL"
    with capsys.disabled():
        print(f"[{name}] {state} ({result.seconds:.2f}s) {result.detail}")
    assert result.ok, f"{name}: {result.detail}"
    if budget is not None:
        assert result.seconds < budget, (
            f"{name} took {result.seconds:.2f}s, budget {budget}s")
    return result


def test_01_three_points_closed_form(capsys):
    """The degree-six Chern integral for three points in three variables
    equals its three-term closed form exactly and restricts to 11 on the
    trace-zero subtorus, within five seconds."""
    run_criterion(capsys, "hilb3-closed-form", budget=5.0)


def test_02_named_point_contributions(capsys):
    """The two closed-form fixed-point contributions (the doubled point
    and the two-direction pair) match the engine for every axis choice."""
    run_criterion(capsys, "hilb3-point-terms")


def test_03_admissibility_is_the_rank_gap(capsys):
    """Over all nested chains with at most six points in at most three
    variables, a chain is admissible exactly when its tangent and
    obstruction fixed ranks are equal, and the tangent rank never exceeds
    the obstruction rank; within sixty seconds."""
    run_criterion(capsys, "admissibility-rank-gap", budget=60.0)


def test_04_enumeration_independence(capsys):
    """Every localization quantity is identical across all compatible
    orderings of the fixed points, for chains of up to five points."""
    run_criterion(capsys, "enumeration-independence")


def test_05_weighted_residue_identity(capsys):
    """Fifty seeded random numerators across block structures match the
    coset-sum side of the weighted residue identity exactly."""
    run_criterion(capsys, "weighted-residue-cosets")


def test_06_methods_agree(capsys):
    """Localization and iterated residues give identical integrals over
    the ambient dimensions and chain shapes in the matrix, within one
    hundred twenty seconds."""
    run_criterion(capsys, "method-agreement", budget=120.0)


def test_07_off_diagonal_terms_vanish(capsys):
    """Residue terms of identity-fiber chains other than the chain of
    first-axis steps vanish, and that chain's term is the whole
    integral."""
    run_criterion(capsys, "residue-term-vanishing")


def test_08_full_flag_reduction(capsys):
    """Integrals over full flags of punctual subschemes reduce to the
    corresponding unnested integrals."""
    run_criterion(capsys, "full-flag-reduction")


def test_09_structural_identities(capsys):
    """Tangent minus the punctual correction equals the punctual tangent,
    the punctual net rank matches the tower dimension count, and the
    integral degrees obey the dimension law."""
    run_criterion(capsys, "structural-identities")


def test_10_ambient_stability(capsys):
    """Enlarging the ambient dimension while folding in the compensating
    parameter factors leaves the nilpotent integral unchanged."""
    run_criterion(capsys, "n-stability")
