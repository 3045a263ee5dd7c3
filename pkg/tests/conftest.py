import random

from uniflab.perms import Perm, SubgroupSet, compose


def generated_subgroup(n: int, gens) -> SubgroupSet:
    """Subgroup generated by ``gens``, by breadth-first multiplication."""
    elems = {Perm.identity(n)}
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return SubgroupSet(n, elems)


def random_perm(rng: random.Random, n: int) -> Perm:
    im = list(range(n))
    rng.shuffle(im)
    return Perm(tuple(im))


def random_subgroup(rng: random.Random, n: int) -> SubgroupSet:
    return generated_subgroup(n, [random_perm(rng, n) for _ in range(rng.randint(0, 2))])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
