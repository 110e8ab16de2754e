import random

import mpmath

from fuchsian.codec import load_group
from fuchsian.hyperbolic import product
from fuchsian.takeuchi import get_triple, synthesize
from fuchsian.tessellation import lift

HP_DPS = 60


def word_map(gens, word):
    """Signed word over the six squared generators -> map."""
    return product(gens[k - 1] if k > 0 else gens[-k - 1].inverse() for k in word)


def random_words(rng: random.Random, count: int, max_len: int = 8):
    out = []
    for _ in range(count):
        n = rng.randint(1, max_len)
        out.append([rng.choice((1, -1)) * rng.randint(1, 6) for _ in range(n)])
    return out


def hp_domain(label: str):
    """Domain lifted to HP_DPS digits plus its generators; use inside mpmath.workdps(HP_DPS)."""
    _, dom = load_group(label)
    hp = synthesize(get_triple(label), dps=HP_DPS)
    with mpmath.workdps(HP_DPS):
        gens = [g.canonical() for g in hp.squared_generators]
        return lift(dom, gens, HP_DPS), gens


ACCEPTANCE_LINES: list = []


def record(n: int, title: str, ok: bool, detail: str) -> bool:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] C{n:<2} {title}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1][1:])):
            terminalreporter.write_line(line)
