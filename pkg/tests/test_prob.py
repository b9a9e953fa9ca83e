import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from extgame.prob import (
    BayesNet,
    Cpt,
    Dag,
    JointDistribution,
    Space,
    StructureError,
    ValidationError,
    VariableSpec,
    conditional,
    cpt_from_joint,
    joint_from_bayes_net,
    marginal,
)

Y = VariableSpec("y", ("AB", "B"))
G = VariableSpec("g", ("ab", "b"))
XR = VariableSpec("x_R", ("0", "1"))
D = VariableSpec("D", ("0", "1"))
XC = VariableSpec("x_C", ("0", "1"))


def net(variables, edges, cpts):
    dag = Dag.from_variables(variables, edges)
    return BayesNet(dag.nodes, dag.edges, dag.labeling, cpts)


def table2(alpha, z_ab):
    z_b = 1 - z_ab
    return JointDistribution.from_mapping(
        (Y, G),
        {
            ("AB", "ab"): alpha * z_ab,
            ("B", "ab"): (1 - alpha) * z_b,
            ("AB", "b"): (1 - alpha) * z_ab,
            ("B", "b"): alpha * z_b,
        },
    )


class TestValidation:
    def test_variable_needs_two_distinct_labels(self):
        with pytest.raises(ValidationError):
            VariableSpec("x", ("a",))
        with pytest.raises(ValidationError):
            VariableSpec("x", ("a", "a"))

    def test_joint_must_be_normalised_exactly(self):
        with pytest.raises(ValidationError):
            JointDistribution(Space((Y, G)), (F(1, 4),) * 3 + (F(1, 4) + F(1, 10**30),))
        with pytest.raises(ValidationError):
            JointDistribution(Space((Y, G)), (F(-1, 4), F(1, 2), F(1, 2), F(1, 4)))

    def test_cycle_is_a_structure_error(self):
        with pytest.raises(StructureError):
            Dag.from_variables((Y, G), [("y", "g"), ("g", "y")])

    def test_unnormalised_cpt_row(self):
        with pytest.raises(ValidationError):
            Cpt(G, (Y,), {("AB",): (F(1, 2), F(1, 3)), ("B",): (0, 1)})

    def test_unknown_variable(self):
        with pytest.raises(ValidationError):
            marginal(JointDistribution.uniform((Y, G)), "z")


class TestJointFromBayesNet:
    def test_fearful_delta_net(self):
        n = net((Y, G), [("y", "g")], {
            "y": Cpt.root(Y, (0, 1)),
            "g": Cpt(G, (Y,), {("AB",): (1, 0), ("B",): (0, 1)}),
        })
        assert joint_from_bayes_net(n) == JointDistribution.point_mass((Y, G), ("B", "b"))

    def test_unconnected_uniform_pair(self):
        n = net((XR, XC), [], {"x_R": Cpt.root(XR, (F(1, 2), F(1, 2))), "x_C": Cpt.root(XC, (F(1, 2), F(1, 2)))})
        assert joint_from_bayes_net(n).probs == (F(1, 4),) * 4

    def test_sensor_chain(self):
        copy_d = Cpt(D, (XR,), {("0",): (1, 0), ("1",): (0, 1)})
        copy_c = Cpt(XC, (D,), {("0",): (1, 0), ("1",): (0, 1)})
        n = net((XR, D, XC), [("x_R", "D"), ("D", "x_C")],
                {"x_R": Cpt.root(XR, (F(1, 2), F(1, 2))), "D": copy_d, "x_C": copy_c})
        j = joint_from_bayes_net(n)
        # brute force: only the two all-equal outcomes carry mass
        for o, p in j.items():
            assert p == (F(1, 2) if len(set(o)) == 1 else 0)

    def test_cpt_must_match_the_graph(self):
        with pytest.raises(ValidationError):
            net((Y, G), [("y", "g")], {"y": Cpt.root(Y, (0, 1)), "g": Cpt.root(G, (1, 0))})


class TestMarginalAndConditional:
    def test_uniform_marginal(self):
        assert marginal(JointDistribution.uniform((Y, G)), "y").probs == (F(1, 2), F(1, 2))

    def test_table2_marginal(self):
        assert marginal(table2(F(3, 4), F(1, 2)), "g").probs == (F(1, 2), F(1, 2))

    def test_point_mass_marginal(self):
        assert marginal(JointDistribution.point_mass((Y, G), ("B", "b")), ["g"]).probs == (0, 1)

    def test_zero_rows_are_masked_not_filled(self):
        c = conditional(JointDistribution.point_mass((Y, G), ("B", "b")), "g", "y")
        assert c.support == {("AB",): False, ("B",): True}
        assert c.row("AB") is None
        with pytest.raises(ValidationError):
            c.prob("ab", "AB")

    def test_table2_conditional(self):
        assert conditional(table2(F(3, 4), F(1, 2)), "g", "y").prob("ab", "AB") == F(3, 4)

    def test_product_has_equal_rows(self):
        j = JointDistribution.from_function((Y, G), lambda o: (F(1, 3) if o[0] == "AB" else F(2, 3)) * (F(1, 5) if o[1] == "ab" else F(4, 5)))
        c = conditional(j, "y", "g")
        assert c.row("ab") == c.row("b") == (F(1, 3), F(2, 3))

    def test_cpt_from_joint_flags_degenerate_rows(self):
        cpt, flagged = cpt_from_joint(JointDistribution.point_mass((Y, G), ("B", "b")), "g", ["y"])
        assert flagged == [("AB",)]
        assert cpt.rows[("B",)] == (0, 1)


# -- properties -----------------------------------------------------------

probs = st.integers(min_value=0, max_value=12)


@st.composite
def distributions(draw, size):
    weights = draw(st.lists(probs, min_size=size, max_size=size).filter(any))
    total = sum(weights)
    return tuple(F(w, total) for w in weights)


@st.composite
def binary_nets(draw):
    k = draw(st.integers(min_value=1, max_value=3))
    vs = [VariableSpec(f"v{i}", ("0", "1")) for i in range(k)]
    edges = [(f"v{i}", f"v{j}") for i, j in itertools.combinations(range(k), 2) if draw(st.booleans())]
    dag = Dag.from_variables(vs, edges)
    cpts = {}
    for node in dag.nodes:
        parents = tuple(dag.labeling[p] for p in dag.parents(node))
        rows = {key: draw(distributions(2)) for key in itertools.product(*(p.domain for p in parents))}
        cpts[node] = Cpt(dag.labeling[node], parents, rows)
    return BayesNet(dag.nodes, dag.edges, dag.labeling, cpts)


class TestProperties:
    @given(binary_nets())
    @settings(max_examples=60, deadline=None)
    def test_factorisation_brute_force(self, n):
        j = joint_from_bayes_net(n)
        assert sum(j.probs) == 1
        for o, p in j.items():
            a = dict(zip(j.space.names, o))
            want = F(1)
            for node, cpt in n.cpts.items():
                want *= cpt.rows[tuple(a[v.name] for v in cpt.parents)][cpt.child.index(a[node])]
            assert p == want

    @given(binary_nets())
    @settings(max_examples=60, deadline=None)
    def test_cpts_round_trip_on_support(self, n):
        j = joint_from_bayes_net(n)
        for node, cpt in n.cpts.items():
            got = conditional(j, node, [p.name for p in cpt.parents]) if cpt.parents else None
            if got is None:
                assert marginal(j, node).probs == cpt.rows[()]
                continue
            for key, row in got.rows.items():
                if row is not None:
                    assert row == cpt.rows[key]

    @given(distributions(8))
    @settings(max_examples=60)
    def test_marginals_compose(self, p):
        vs = [VariableSpec(f"v{i}", ("0", "1")) for i in range(3)]
        j = JointDistribution(Space(tuple(vs)), p)
        assert marginal(marginal(j, ["v0", "v2"]), "v0") == marginal(j, "v0")
        assert sum(marginal(j, ["v1"]).probs) == 1

    @given(distributions(2), distributions(2), distributions(2))
    def test_chain_round_trip(self, py, g_ab, g_b):
        cpt = Cpt(G, (Y,), {("AB",): g_ab, ("B",): g_b})
        j = joint_from_bayes_net(net((Y, G), [("y", "g")], {"y": Cpt.root(Y, py), "g": cpt}))
        c = conditional(j, "g", "y")
        for key, pr in zip((("AB",), ("B",)), py):
            assert c.rows[key] == (cpt.rows[key] if pr else None)
