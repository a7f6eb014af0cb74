import random

import pytest

from residue_audit.clifford import CliffordElem
from residue_audit.exact import ExactScalar, Poly, h1
from residue_audit.symbols import BoundarySymbol


def _clifford(rng: random.Random, n: int, scalar: bool) -> CliffordElem:
    coeffs = {}
    masks = [0] if scalar else rng.sample(range(1 << n), 3)
    for mask in masks:
        c = Poly.const(ExactScalar(rng.randint(-4, 4), rng.randint(-4, 4)))
        if rng.random() < 0.3:
            c = c * Poly.atom(h1)
        coeffs[mask] = c
    return CliffordElem(n, coeffs)


def make_symbol(rng: random.Random, n: int = 4, scalar: bool = False, proper: bool = True) -> BoundarySymbol:
    """Random rational symbol with poles only at +-i."""
    p, q = rng.randint(0, 4), rng.randint(0, 4)
    top = p + q - 1 if proper else p + q + 1
    num = [_clifford(rng, n, scalar) for _ in range(max(top, 0) + 1)] if top >= 0 else []
    return BoundarySymbol(n, num, p, q)


@pytest.fixture
def rng():
    return random.Random(20240601)


ACCEPTANCE: dict = {}


def record(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
