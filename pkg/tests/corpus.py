"""A fixed corpus of small grammars over F2 shared by several test modules."""

import random

from grouplang.grammars import Cfg, example_3_12_grammar
from grouplang.transfer.experiments import random_grammar


def corpus():
    gs = [
        example_3_12_grammar(),
        Cfg(2, "S", [("S", (1, "S", -1)), ("S", ())]),
        Cfg(2, "S", [("S", ())]),
        Cfg(2, "S", [("S", ("S",))]),
        Cfg(2, "S", [("S", (1, "S", 2)), ("S", (2, "S", 1)), ("S", ())]),
        Cfg(2, "S", [("S", ("S", "S")), ("S", (1, "S", -1)), ("S", (2, "S", -2)), ("S", ())]),
        Cfg(2, "S", [("S", (1,)), ("S", (2, "S")), ("S", ("S", -1))]),
        Cfg(2, "S", [("S", ("A", "B")), ("A", (1, "A")), ("A", ()), ("B", (-2, "B", 2)), ("B", (1,))]),
    ]
    gs += [random_grammar(random.Random(seed)) for seed in (4, 15)]
    return gs
