import json

import pytest

from homcat.cli import (
    FinitenessError, ParseError, UnresolvedName, Workspace, format_workspace,
    main, parse, run_workspace,
)
from homcat.exactla import Field

A2_SRC = """\
# the path category of 1 -> 2
category A2 over Q
quiver
object 1 2
arrow a: 1 -> 2
"""

DUAL_SRC = """\
category D over GF(32003)
quiver
object s
arrow x: s -> s
rel x*x = 0
"""

TABLE_SRC = """\
category T over Q
table
hom p p: e
hom q q: f
hom p q: g
comp e*e = e
comp f*f = f
comp g*e = g
comp f*g = g
id p = e
id q = f
"""


def run_source(src, **options):
    opts = {"max_degree": 3, "seed": 0, "verify_oracle": False}
    opts.update(options)
    ws = Workspace(parse(src))
    return run_workspace(ws, opts)


def test_parse_a2_quiver():
    ws = Workspace(parse(A2_SRC))
    cat = ws.categories["A2"]
    assert cat.total_dim() == 3
    assert cat.dim("1", "2") == 1
    assert cat.dim("2", "1") == 0


def test_parse_dual_numbers():
    ws = Workspace(parse(DUAL_SRC))
    cat = ws.categories["D"]
    assert cat.total_dim() == 2
    assert cat.field == Field.gf(32003)


def test_unbounded_loop_rejected():
    src = "category L over Q\nquiver\nobject 1\narrow x: 1 -> 1\n"
    with pytest.raises(FinitenessError):
        Workspace(parse(src))


def test_table_category():
    ws = Workspace(parse(TABLE_SRC))
    cat = ws.categories["T"]
    assert cat.total_dim() == 3
    assert cat.validate().ok


def test_corrupted_table_rejected():
    bad = TABLE_SRC.replace("comp g*e = g", "comp g*e = 0")
    with pytest.raises(Exception):
        Workspace(parse(bad))


def test_relation_with_coefficients():
    src = """\
category C over Q
quiver
object 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 1 -> 2
rel b*a - 2*b*c = 0
"""
    ws = Workspace(parse(src))
    cat = ws.categories["C"]
    assert cat.dim("1", "3") == 1      # b*a and b*c identified up to scale


def test_commutative_square():
    src = """\
category SQ over Q
quiver
object 1 2 3 4
arrow a: 1 -> 2
arrow b: 2 -> 4
arrow c: 1 -> 3
arrow d: 3 -> 4
rel b*a - d*c = 0
task cohomology SQ
"""
    ws = Workspace(parse(src))
    cat = ws.categories["SQ"]
    assert cat.dim("1", "4") == 1
    reports, code = run_workspace(ws, {"max_degree": 2, "seed": 0})
    assert code == 0
    assert reports[0].doc["dims"]["HC"] == [1, 0, 0]


def test_scaled_relation_square():
    # rescaling one path in the commutative-square relation changes the
    # structure constants but not the cohomology (isomorphic algebras)
    src = """\
category SQ over Q
quiver
object 1 2 3 4
arrow a: 1 -> 2
arrow b: 2 -> 4
arrow c: 1 -> 3
arrow d: 3 -> 4
rel b*a - 1/2*d*c = 0
task cohomology SQ
"""
    reports, code = run_source(src, max_degree=2)
    assert code == 0
    assert reports[0].doc["dims"]["HC"] == [1, 0, 0]


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as err:
        parse("category X over Q\nquiver\nobject 1\narrow ?: 1 -> 1\n")
    assert err.value.line == 4


def test_unresolved_name():
    src = A2_SRC + "ideal I in A2 gens: nosuch\n"
    with pytest.raises(UnresolvedName):
        Workspace(parse(src))


def test_roundtrip_fixpoint():
    src = A2_SRC + DUAL_SRC + "ideal I in A2 gens: a\ntask validate A2\n"
    ws1 = parse(src)
    printed = format_workspace(ws1)
    ws2 = parse(printed)
    assert format_workspace(ws2) == printed


def test_cohomology_task_dual_numbers():
    reports, code = run_source(DUAL_SRC + "task cohomology D\n")
    assert code == 0
    assert reports[0].doc["dims"]["HC"] == [2, 1, 1, 1]


def test_validate_task_exit_codes():
    reports, code = run_source(A2_SRC + "task validate A2\n")
    assert code == 0 and reports[0].status == "pass"


def test_les_task_negative_exit_2():
    src = A2_SRC + "ideal I in A2 gens: a\ntask les A2 I\n"
    reports, code = run_source(src)
    assert code == 2
    assert reports[0].status == "hypothesis"


def test_ideal_check_task():
    src = A2_SRC + "ideal I in A2 gens: a\ntask ideal-check A2 I\n"
    reports, code = run_source(src)
    assert code == 2
    doc = reports[0].doc
    assert doc["hypotheses"]["idempotent"] is False
    assert doc["hypotheses"]["witness"] is not None


CMP_SRC = """\
category U over Q
quiver
object 1
category T over Q
quiver
object 1
bimodule M over (U,T)
dim 1 1 = 1
task cmp T U M
"""


def test_cmp_task():
    reports, code = run_source(CMP_SRC)
    assert code == 0
    doc = reports[0].doc
    assert doc["dims"]["HC"] == [1, 0, 0, 0]
    assert all(doc["exact_at"])


def test_happel_task():
    src = DUAL_SRC + """\
module S over D left
dim s = 1
act x = [[0]]
task happel D S
"""
    reports, code = run_source(src)
    assert code == 0
    doc = reports[0].doc
    assert doc["dims"]["ExtCI"] == [0, 0, 1, 1]
    assert all(i["ok"] for i in doc["happel"]["identities"])


def test_json_deterministic(tmp_path, capsys):
    path = tmp_path / "ws.kcat"
    path.write_text(DUAL_SRC + "task cohomology D\ntask validate D\n")
    outs = []
    for _ in range(2):
        code = main([str(path), "--json", "--seed", "7", "--max-degree", "3"])
        assert code == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    docs = [json.loads(line) for line in outs[0].splitlines()]
    assert docs[0]["schema"] == 1
    assert docs[0]["seed"] == 7


def test_cli_field_override(tmp_path, capsys):
    path = tmp_path / "ws.kcat"
    path.write_text(A2_SRC + "task cohomology A2\n")
    code = main([str(path), "--field", "gf:5", "--json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out.splitlines()[0])
    assert doc["dims"]["HC"] == [1, 0, 0, 0, 0]


def test_cli_exit_1_on_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.kcat"
    path.write_text("category ! over Q\n")
    assert main([str(path)]) == 1


def test_cli_exit_1_on_characteristic_collision(tmp_path, capsys):
    # a coefficient with denominator divisible by the overriding prime
    path = tmp_path / "frac.kcat"
    path.write_text("""\
category C over Q
quiver
object 1 2 3
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 1 -> 2
rel b*a - 1/5*b*c = 0
""")
    assert main([str(path), "--field", "gf:5"]) == 1
    assert main([str(path)]) == 0


def test_cli_verify_oracle(tmp_path, capsys):
    path = tmp_path / "d.kcat"
    path.write_text(DUAL_SRC + "task cohomology D\n")
    code = main([str(path), "--max-degree", "3", "--verify-oracle"])
    assert code == 0
    out = capsys.readouterr().out
    assert "bar-resolution oracle" in out


def test_grammar_rejects_unknown_task():
    with pytest.raises(ParseError):
        parse("task explode X\n")


def test_exit_3_on_verification_failure(monkeypatch):
    # exercise the verification-failure exit path by sabotaging the
    # center computation the cohomology task cross-checks against
    import homcat.cli as cli_mod
    monkeypatch.setattr(cli_mod, "center", lambda cat: (99, []))
    reports, code = run_source(DUAL_SRC + "task cohomology D\n")
    assert reports[0].status == "verification"
    assert code == 3


def test_grammar_accepts_and_rejects_each_production():
    # accepted forms, one per production
    parse("category C over GF(7)\nquiver\nobject 1\n")
    parse("category C over Q\nquiver\nobject 1\narrow x: 1 -> 1\nrel x*x = 0\nbound 9\n")
    parse(TABLE_SRC)
    parse(A2_SRC + "module M over A2 left\ndim 1 = 1\nact a = [[1]]\n")
    parse(A2_SRC + "bimodule B over (A2,A2)\ndim 1 1 = 1\nlact a 1 = [[1]]\nract a 1 = [[1]]\n")
    parse(A2_SRC + "ideal I in A2 gens: a, 2*a\n")
    parse(A2_SRC + "task validate A2\ntask cohomology A2\n")
    # rejected forms
    for bad in [
        "category C over R\n",                       # unknown field
        "category C over Q\nquiver\nrel = 0\n",       # empty relation
        "category C over Q\nquiver\nbound x\n",       # non-numeric bound
        "category C over Q\nquiver\narrow a 1 -> 2\n",  # missing colon
        "object 1 2\n",                               # object outside a quiver
        "module M over A2 upside\n",                  # bad side
        "dim 1 = 1\n",                                # dim outside a block
        "act a = [[1]]\n",                            # act outside a block
        "lact a 1 = [[1]]\n",                         # lact outside a bimodule
        "ideal I in A2 foo: a\n",                     # missing gens keyword
        "task cohomology\n" + "quiver\n",             # quiver outside category
        "hom 1 2: a\n",                               # table line outside block
        "comp g*f = g\n",                             # comp outside block
        "id 1 = e\n",                                 # id outside block
    ]:
        with pytest.raises(ParseError):
            parse(bad)
    # build-time rejections
    with pytest.raises(UnresolvedName):
        Workspace(parse(TABLE_SRC.replace("id q = f\n", "")))   # missing identity
    with pytest.raises(UnresolvedName):
        Workspace(parse(TABLE_SRC + "comp g*g = g\n"))          # not composable


def test_bimodule_with_actions(tmp_path):
    src = """\
category U over Q
quiver
object 1
arrow x: 1 -> 1
rel x*x = 0
category T over Q
quiver
object 1
bimodule M over (U,T)
dim 1 1 = 2
lact x 1 = [[0,0],[1,0]]
task cmp T U M
"""
    reports, code = run_source(src)
    assert code == 0
    assert all(reports[0].doc["exact_at"])
