import random
from pathlib import Path

import pytest

from c2o.codegen import TypeConfig
from c2o.frontend import parse
from c2o.harness.diff import random_steps
from c2o.pipeline import compile_contract

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"


def load(rel: str):
    return parse((CORPUS / rel).read_text())


def program(source: str, cfg: TypeConfig = TypeConfig()):
    return compile_contract(parse(source), cfg).program


def traces(contract, seed, count, depth, cfg=TypeConfig(), domains=None):
    rng = random.Random(seed)
    return [random_steps(contract, rng, rng.randint(1, depth), domains or {}, cfg)
            for _ in range(count)]


@pytest.fixture
def counter_source():
    return """
    component Counter {
      input Tick : bool;
      eq x : int = 0 -> pre x + 1;
      guarantee "c" : x >= 0;
    }
    """
