import math

import pytest

from chirp_dictionary import NumericalCheckError
from chirp_dictionary.selftest import (
    CheckResult,
    SelfTestReport,
    check_dechirp_identity,
    check_multitone,
    check_on_grid_sparsity,
    check_operator_matrix,
    check_orthogonality,
    check_tref_half_width,
    check_tref_membership,
)


def test_orthogonality_check(rng):
    assert check_orthogonality(rng, 64, references=3).passed


def test_dechirp_identity_check(rng):
    assert check_dechirp_identity(rng, cases=10).passed
    faulty = check_dechirp_identity(rng, cases=3, inject_fault=True)
    assert not faulty.passed
    assert faulty.defect > 1e-6


@pytest.mark.parametrize("N", [64, 257])
def test_operator_matrix_check(rng, N):
    assert check_operator_matrix(rng, N).passed


def test_on_grid_sparsity_check(rng):
    assert check_on_grid_sparsity(rng, cases=5).passed


def test_tref_checks(rng):
    assert check_tref_half_width().defect == 0.0
    assert check_tref_membership(rng, cases=50).defect == 0.0


def test_multitone_check(rng):
    assert check_multitone(rng).passed


def test_report():
    report = SelfTestReport((CheckResult("ok", 1e-14, 1e-10), CheckResult("broken", math.inf, 1e-10)))
    assert not report.passed
    assert [check.name for check in report.failures()] == ["broken"]
    assert str(report).splitlines()[1].startswith("FAIL  broken")
    with pytest.raises(NumericalCheckError, match="broken"):
        report.raise_on_failure()
    SelfTestReport(report.checks[:1]).raise_on_failure()
