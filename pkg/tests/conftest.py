import numpy as np
import pytest

from snnas.batchio import gen_synthetic_batch
from snnas.imc import HardwareConfig
from snnas.quant import QuantSpec
from snnas.search import CandidateEvaluator, EvalContext
from snnas.spike import LifParams

# One line per acceptance criterion, printed in the terminal summary so
# the verdicts survive pytest's output capture.
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)

# Reduced problem scale shared by the search-level tests: small enough
# that a full 1458-candidate sweep takes seconds on one CPU.
TINY_CHANNELS = 4
TINY_CLASSES = 10
TINY_SEED = 0


@pytest.fixture(scope="session")
def tiny_batch():
    return gen_synthetic_batch(4, (3, 8, 8), seed=123)


@pytest.fixture(scope="session")
def tiny_lif():
    return LifParams(timesteps=2)


@pytest.fixture(scope="session")
def tiny_spec():
    return QuantSpec(bit_w=8, bit_d=1)


@pytest.fixture(scope="session")
def tiny_hw():
    return HardwareConfig()


@pytest.fixture(scope="session")
def tiny_ctx(tiny_batch, tiny_hw, tiny_spec, tiny_lif):
    return EvalContext(batch=np.asarray(tiny_batch), hw=tiny_hw,
                       quant=tiny_spec, lif=tiny_lif, run_seed=TINY_SEED,
                       base_channels=TINY_CHANNELS, num_classes=TINY_CLASSES,
                       beta=None)


@pytest.fixture(scope="session")
def tiny_evaluator(tiny_ctx):
    # shared memoized evaluator: scores/costs are pure functions of the
    # context and cell pair, so reuse across budget vectors is exact
    return CandidateEvaluator(tiny_ctx)
