import os
import subprocess
import sys

import pytest

from crispbisim import kernel_available, run
from crispbisim import oracle
from crispbisim.checking import corpus

needs_kernel = pytest.mark.skipif(not kernel_available(), reason="compiled kernel not built")


@needs_kernel
@pytest.mark.parametrize("counting", [False, True])
def test_backends_agree_on_corpus(counting):
    for g in corpus(300, seed=42, max_n=14, max_m=60, max_l=6, max_labels=3):
        a = run(g, counting=counting, backend="python")
        b = run(g, counting=counting, backend="compiled")
        assert a.partition == b.partition
        assert (a.stats.split_calls, a.stats.max_participation) == (b.stats.split_calls, b.stats.max_participation)


@needs_kernel
def test_backends_agree_on_larger_graphs():
    for seed in range(3):
        g = oracle.random_graph(2000, 8000, 6, 2, seed, 2)
        for counting in (False, True):
            assert run(g, counting=counting, backend="python").partition == \
                run(g, counting=counting, backend="compiled").partition


@needs_kernel
def test_trace_rejected_on_compiled(example1):
    with pytest.raises(ValueError):
        run(example1, backend="compiled", trace=lambda e, ev: None)


def test_trace_forces_python(example1):
    assert run(example1, trace=lambda e, ev: None).stats.backend == "python"


def test_unknown_backend(example1):
    with pytest.raises(ValueError):
        run(example1, backend="gpu")


def _probe(code, **env):
    full = dict(os.environ, **env)
    return subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=full, check=True).stdout


def test_pure_env_selects_python():
    out = _probe("import crispbisim; print(crispbisim.default_backend())", CRISPBISIM_PURE="1")
    assert out.strip() == "python"


def test_fallback_when_kernel_missing(example1_path):
    code = (
        "import sys, importlib.abc\n"
        "class Block(importlib.abc.MetaPathFinder):\n"
        "    def find_spec(self, name, path, target=None):\n"
        "        if name == 'crispbisim._kernel':\n"
        "            raise ImportError('blocked')\n"
        "sys.meta_path.insert(0, Block())\n"
        "import crispbisim\n"
        "from crispbisim import parse_graph, compute\n"
        f"g = parse_graph(open({str(example1_path)!r}).read())\n"
        "print(crispbisim.kernel_available(), crispbisim.default_backend(), compute(g).to_json())\n"
    )
    out = _probe(code)
    assert out.startswith("False python")
    assert "[['a', 'b'], ['c', 'f', 'g'], ['d', 'e']]" in out
