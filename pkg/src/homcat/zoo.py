"""Small standard categories used across the test and acceptance suites.

All of these are basic path-algebra style categories written out as
tables.  The random generator produces radical-square-zero categories,
which are associative by construction, so every seed yields a valid
category.
"""

import random

from .kcat import category_from_tables, unit_category

__all__ = [
    "unit_category", "discrete", "a2", "a3", "kronecker", "dual_numbers",
    "random_two_object", "standard_categories",
]


def discrete(field, n=2):
    """n objects, identities only (K x ... x K)."""
    objects = tuple(str(i + 1) for i in range(n))
    hom = {(x, x): (f"e{x}",) for x in objects}
    comp = {(x, x, x): [[[1]]] for x in objects}
    ids = {x: (1,) for x in objects}
    return category_from_tables(field, objects, hom, comp, ids)


def a2(field):
    """Path category of 1 -> 2: basis e1, e2, a."""
    objects = ("1", "2")
    hom = {("1", "1"): ("e1",), ("2", "2"): ("e2",), ("1", "2"): ("a",)}
    comp = {
        ("1", "1", "1"): [[[1]]],
        ("2", "2", "2"): [[[1]]],
        ("1", "1", "2"): [[[1]]],     # a o e1 = a
        ("1", "2", "2"): [[[1]]],     # e2 o a = a
    }
    ids = {"1": (1,), "2": (1,)}
    return category_from_tables(field, objects, hom, comp, ids)


def a3(field):
    """Path category of 1 -> 2 -> 3 with the composite path as basis."""
    objects = ("1", "2", "3")
    hom = {("1", "1"): ("e1",), ("2", "2"): ("e2",), ("3", "3"): ("e3",),
           ("1", "2"): ("a",), ("2", "3"): ("b",), ("1", "3"): ("b*a",)}
    comp = {
        ("1", "1", "1"): [[[1]]], ("2", "2", "2"): [[[1]]], ("3", "3", "3"): [[[1]]],
        ("1", "1", "2"): [[[1]]], ("1", "2", "2"): [[[1]]],
        ("2", "2", "3"): [[[1]]], ("2", "3", "3"): [[[1]]],
        ("1", "1", "3"): [[[1]]], ("1", "3", "3"): [[[1]]],
        ("1", "2", "3"): [[[1]]],    # b o a = b*a
    }
    ids = {"1": (1,), "2": (1,), "3": (1,)}
    return category_from_tables(field, objects, hom, comp, ids)


def kronecker(field):
    """Two objects with two parallel arrows a, b: 1 => 2."""
    objects = ("1", "2")
    hom = {("1", "1"): ("e1",), ("2", "2"): ("e2",), ("1", "2"): ("a", "b")}
    comp = {
        ("1", "1", "1"): [[[1]]],
        ("2", "2", "2"): [[[1]]],
        ("1", "1", "2"): [[[1, 0], [0, 1]]],
        ("1", "2", "2"): [[[1, 0]], [[0, 1]]],
    }
    ids = {"1": (1,), "2": (1,)}
    return category_from_tables(field, objects, hom, comp, ids)


def dual_numbers(field):
    """One object, Hom = K[x]/(x^2): basis e, x with x o x = 0."""
    objects = ("*",)
    hom = {("*", "*"): ("e", "x")}
    comp = {("*", "*", "*"): [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]}
    ids = {"*": (1, 0)}
    return category_from_tables(field, objects, hom, comp, ids)


def random_two_object(field, seed):
    """A random radical-square-zero category on two objects.

    One or two arrows with random endpoints (at most one loop overall so
    that degree-5 bar complexes stay small); all products of arrows are
    zero, which makes associativity automatic.
    """
    rng = random.Random(seed)
    objects = ("1", "2")
    n_arrows = rng.choice((1, 2))
    arrows = []
    has_loop = False
    while len(arrows) < n_arrows:
        s = rng.choice(objects)
        g = rng.choice(objects)
        if s == g:
            if has_loop:
                continue
            has_loop = True
        arrows.append((f"r{len(arrows)}", s, g))
    hom = {}
    for x in objects:
        for y in objects:
            labels = []
            if x == y:
                labels.append(f"e{x}")
            labels.extend(name for name, s, g in arrows if s == x and g == y)
            hom[(x, y)] = tuple(labels)
    comp = {}
    for x in objects:
        for y in objects:
            dxy = len(hom[(x, y)])
            if not dxy:
                continue
            for z in objects:
                dyz = len(hom[(y, z)])
                if not dyz:
                    continue
                dxz = len(hom[(x, z)])
                table = []
                for i in range(dxy):
                    row = []
                    for j in range(dyz):
                        f_is_id = x == y and i == 0
                        g_is_id = y == z and j == 0
                        if f_is_id and g_is_id:
                            vec = [0] * dxz
                            vec[0] = 1
                        elif f_is_id:
                            vec = [0] * dxz
                            vec[hom[(x, z)].index(hom[(y, z)][j])] = 1
                        elif g_is_id:
                            vec = [0] * dxz
                            vec[hom[(x, z)].index(hom[(x, y)][i])] = 1
                        else:
                            vec = [0] * dxz    # radical square zero
                        row.append(vec)
                    table.append(row)
                comp[(x, y, z)] = table
    ids = {x: tuple(1 if i == 0 else 0 for i in range(len(hom[(x, x)])))
           for x in objects}
    return category_from_tables(field, objects, hom, comp, ids)


def standard_categories(field):
    """The fixed test battery: name -> category."""
    return {
        "unit": unit_category(field),
        "KxK": discrete(field, 2),
        "A2": a2(field),
        "kronecker": kronecker(field),
        "dual": dual_numbers(field),
    }
