import numpy as np
import pytest

from loewner_lab.hermitian import KERNELS, HermitianMatrix

ACCEPTANCE_LINES = []


@pytest.fixture(params=sorted(KERNELS))
def backend(request):
    return request.param


@pytest.fixture
def acceptance_line():
    def record(number, title, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_hermitian_np(rng, n, scale=1.0):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HermitianMatrix(scale * z)


def random_psd_np(rng, n, lo=0.0, hi=1.0):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, _ = np.linalg.qr(z)
    w = rng.uniform(lo, hi, size=n)
    return HermitianMatrix((q * w) @ q.conj().T)
