"""Acceptance gate: every criterion at its stated tolerance, one printed
pass/fail line each.

The numerical criteria run through the verification suites (the same code
the `ncwig verify` command drives); the determinism criterion runs the
full CLI twice and compares bytes.
"""

import numpy as np
import pytest

from ncwigner import VerifyConfig, run_verification_suite
from ncwigner.cli import main


def _run(suite_names):
    return run_verification_suite(VerifyConfig(suites=suite_names, seed=7))


def _report_and_assert(criterion, reports):
    assert reports, f"{criterion}: no reports produced"
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"ACCEPTANCE {criterion} [{status}] {r.name}: "
              f"metric={r.metric:.6g} tolerance={r.tolerance:.6g}")
    failed = [r for r in reports if not r.passed]
    assert not failed, f"{criterion}: failed {[r.name for r in failed]}"


class TestAcceptance:
    def test_1_qm_sector_equivalence(self):
        # k2 = k3 = 0 transform vs the textbook cross transform, through the
        # documented convention map; Gaussian and first-excited states;
        # <= 1e-6 relative on a 32^2 probe grid
        _report_and_assert("1-qm-equivalence", _run(("qm_equivalence",)))

    def test_2_marginal_identities(self):
        # position and momentum marginals match the scaled densities with
        # prefactor |k1 a|/sqrt|k1^2 a^2 - k2 k3 b g|, <= 1e-6, for
        # (1,-1,1), the asymmetric (2,1,-1), and (1,-1,-2)
        _report_and_assert("2-marginals", _run(("marginals",)))

    def test_3_star_product_marginals(self):
        # integrating the 4D field over either conjugate pair reproduces the
        # corresponding 2D star product, <= 1e-4 absolute, 32^2 outputs,
        # two distinct generic labels
        _report_and_assert("3-star-marginals", _run(("star_marginals",)))

    def test_4_isometry(self):
        # squared-norm ratio constant across 5 random rank-one operators per
        # sector (spread < 1e-4); mean stable to 1e-3 under grid doubling
        _report_and_assert("4-isometry", _run(("isometry",)))

    def test_5_commutative_limit(self):
        # k2 = k3 = 4^-m, m = 0..4 (gamma = -1 keeps m = 0 off the
        # degenerate surface): strictly decreasing distances, final < 1e-3
        _report_and_assert("5-qm-limit", _run(("qm_limit",)))

    def test_6_oracle_equivalence(self):
        # fast transforms vs the direct quadrature oracle at 100 random
        # probe points per sector (<= 1e-8); 4D star products vs the nested
        # quadrature oracle on 8^4 grids (<= 1e-6)
        _report_and_assert("6-oracle", _run(("oracle_wigner", "oracle_star")))

    def test_7_structural_invariants(self):
        # group associativity over 1000 random triples (<= 1e-12), both
        # representation actions unitary/homomorphic (<= 1e-10), transform
        # sesquilinearity/hermiticity (<= 1e-12) and diagonal reality
        # (<= 1e-10 of the maximum)
        _report_and_assert(
            "7-structure",
            _run(("group_associativity", "uir_properties", "wigner_symmetries")),
        )

    def test_8_determinism(self, tmp_path):
        # `verify --suite all --seed 7` twice: byte-identical reports
        a = tmp_path / "run1.txt"
        b = tmp_path / "run2.txt"
        code1 = main(["verify", "--suite", "all", "--seed", "7", "--out", str(a)])
        code2 = main(["verify", "--suite", "all", "--seed", "7", "--out", str(b)])
        identical = a.read_bytes() == b.read_bytes()
        status = "PASS" if (identical and code1 == 0 and code2 == 0) else "FAIL"
        print(f"ACCEPTANCE 8-determinism [{status}] verify-all twice: "
              f"identical={identical} exit_codes=({code1},{code2})")
        assert code1 == 0 and code2 == 0
        assert identical
