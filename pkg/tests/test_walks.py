import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hinwalk import (
    BudgetExceededError,
    MetaPath,
    UnknownRelationError,
    UnknownTypeError,
    commuting_matrix,
    enumerate_metapaths,
    enumerate_path_instances,
    parse_metapath,
    walk_distribution,
    walk_probability,
)
from corpus import oracle_counts, oracle_distribution, random_typed_graph

P_FOUNDERS = "Person -found-> Organization -found~-> Person"


def realized_paths(graph, max_len=3):
    return enumerate_metapaths(graph, "Object", "Object", max_len)


class TestWalkDistribution:
    def test_g2_star(self, g2, p_star):
        graph, _ = g2
        dist = walk_distribution(graph, "v1", p_star)
        assert dist.mass == {"v1": 0.5, "v2": 0.25, "v3": 0.25}

    def test_g1_founders(self, g1):
        graph, _ = g1
        dist = walk_distribution(graph, "p1", parse_metapath(P_FOUNDERS))
        assert dist.mass == {"p1": 0.5, "p2": 0.5}

    def test_empty_path_base_case(self, g1):
        graph, _ = g1
        dist = walk_distribution(graph, "p1", parse_metapath("Object"))
        assert dist.mass == {"p1": 1.0}

    def test_source_type_violation(self, g1):
        graph, _ = g1
        with pytest.raises(ValueError, match="start type"):
            walk_distribution(graph, "p1", parse_metapath("Organization -found~-> Person"))

    def test_dead_end_drops_mass(self, g1):
        graph, _ = g1
        # p2 has no inbound found edge: half the mass at depth 1 dies at depth 2
        path = parse_metapath("Organization -found~-> Person -found~-> Person")
        dist = walk_distribution(graph, "g", path)
        assert dist.mass == {}


class TestWalkProbability:
    def test_g1(self, g1):
        graph, _ = g1
        assert walk_probability(graph, "p1", "p2", parse_metapath(P_FOUNDERS)) == 0.5

    def test_g2(self, g2, p_star):
        graph, _ = g2
        assert walk_probability(graph, "v1", "v2", p_star) == 0.25

    def test_empty_path_self(self, g2):
        graph, _ = g2
        assert walk_probability(graph, "v2", "v2", parse_metapath("Venue")) == 1.0

    def test_unreachable_is_zero(self, g2, p_star):
        graph, _ = g2
        assert walk_probability(graph, "v2", "v3", p_star) == 0.0


class TestEnumerateInstances:
    def test_g1_enumeration(self, g1):
        graph, _ = g1
        instances = enumerate_path_instances(graph, "p1", parse_metapath(P_FOUNDERS))
        assert instances == [["p1", "g", "p1"], ["p1", "g", "p2"]]

    def test_g2_star_endpoints(self, g2, p_star):
        graph, _ = g2
        instances = enumerate_path_instances(graph, "v1", p_star)
        assert sorted(p[-1] for p in instances) == ["v1", "v1", "v2", "v3"]

    def test_no_instances(self, g1):
        graph, _ = g1
        path = parse_metapath("Person -found~-> Organization")
        assert enumerate_path_instances(graph, "p1", path) == []

    def test_cap_reported(self, g2, p_star):
        graph, _ = g2
        with pytest.raises(BudgetExceededError, match="2"):
            enumerate_path_instances(graph, "v1", p_star, max_instances=2)


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(30))
    def test_walk_matches_instance_sums(self, seed):
        graph, _ = random_typed_graph(seed, max_entities=14)
        if not graph.entities:
            return
        for path in realized_paths(graph):
            for source in graph.entities:
                oracle = oracle_distribution(graph, source, path)
                mass = walk_distribution(graph, source, path).mass
                assert set(mass) == set(oracle)
                for t, p in oracle.items():
                    assert mass[t] == pytest.approx(p, abs=1e-12)

    @pytest.mark.parametrize("seed", range(30))
    def test_commuting_matrix_matches_counts(self, seed):
        graph, _ = random_typed_graph(seed, max_entities=14)
        for path in realized_paths(graph):
            matrix = commuting_matrix(graph, path)
            for source in matrix.row_entities:
                counts = oracle_counts(graph, source, path)
                for target in matrix.col_entities:
                    assert matrix.count(source, target) == counts.get(target, 0)

    @pytest.mark.parametrize("seed", range(20))
    def test_mass_total_vs_dead_ends(self, seed):
        graph, _ = random_typed_graph(seed, max_entities=14)
        for path in realized_paths(graph):
            for source in graph.entities:
                total = walk_distribution(graph, source, path).total()
                assert total <= 1.0 + 1e-9
                if _has_dead_end(graph, source, path):
                    assert total < 1.0 - 1e-9
                else:
                    assert total == pytest.approx(1.0, abs=1e-9)


def _has_dead_end(graph, source, path):
    """Some prefix of some walk hits an empty qualifying neighbor set."""
    steps = [(graph.relation_index(r.name), r.inverted) for r in path.relations]
    current = {graph.entity_index(source)}
    for (ridx, inv), next_type in zip(steps, path.node_types[1:]):
        following = set()
        for e in current:
            qualifying = [
                w
                for w in graph.neighbors_idx(e, ridx, inv)
                if next_type == "Object" or next_type in graph.closed_types_idx(w)
            ]
            if not qualifying:
                return True
            following.update(qualifying)
        current = following
    return False


class TestComposition:
    @pytest.mark.parametrize("seed", range(12))
    def test_chained_forward_pass(self, seed):
        graph, _ = random_typed_graph(seed, max_entities=12)
        paths = [p for p in realized_paths(graph, max_len=2) if p.length == 2]
        for whole in paths[:6]:
            first = MetaPath(whole.node_types[:2], whole.relations[:1])
            second = MetaPath(whole.node_types[1:], whole.relations[1:])
            for source in graph.entities:
                head = walk_distribution(graph, source, first).mass
                chained = {}
                for mid, m in head.items():
                    for t, q in walk_distribution(graph, mid, second).mass.items():
                        chained[t] = chained.get(t, 0.0) + m * q
                direct = walk_distribution(graph, source, whole).mass
                assert set(chained) == set(direct)
                for t in direct:
                    assert direct[t] == pytest.approx(chained[t], abs=1e-12)


class TestTypeWidening:
    @pytest.mark.parametrize("seed", range(12))
    def test_ancestor_widening_grows_support(self, seed):
        graph, hierarchy = random_typed_graph(seed, max_entities=12)
        typed = []
        for path in realized_paths(graph, max_len=2):
            # tighten one interior position to a concrete type, then re-widen it
            for t in hierarchy.types:
                if t == "Object":
                    continue
                node_types = list(path.node_types)
                node_types[path.length] = t
                typed.append(MetaPath(tuple(node_types), path.relations))
                if len(typed) >= 8:
                    break
            if len(typed) >= 8:
                break
        for path in typed:
            pos = path.length
            narrow_type = path.node_types[pos]
            for ancestor in sorted(hierarchy.ancestors(narrow_type)):
                node_types = list(path.node_types)
                node_types[pos] = ancestor
                widened = MetaPath(tuple(node_types), path.relations)
                for source in graph.entities:
                    if path.node_types[0] not in graph.entity_types(source):
                        continue
                    narrow = set(walk_distribution(graph, source, path).mass)
                    wide = set(walk_distribution(graph, source, widened).mass)
                    assert narrow <= wide


class TestCommutingMatrix:
    def test_g2_star_counts(self, g2, p_star):
        graph, _ = g2
        matrix = commuting_matrix(graph, p_star)
        expected = {
            ("v1", "v1"): 2,
            ("v1", "v2"): 1,
            ("v1", "v3"): 1,
            ("v2", "v1"): 1,
            ("v2", "v2"): 1,
            ("v3", "v1"): 1,
            ("v3", "v3"): 1,
        }
        assert {(r, c): n for r, c, n in matrix.entries()} == expected

    def test_g1_direct_edges(self, g1):
        graph, _ = g1
        matrix = commuting_matrix(graph, parse_metapath("Person -found-> Organization"))
        assert {(r, c): n for r, c, n in matrix.entries()} == {("p1", "g"): 1, ("p2", "g"): 1}

    def test_zero_step_identity(self, g2):
        graph, _ = g2
        matrix = commuting_matrix(graph, parse_metapath("Venue"))
        assert {(r, c): n for r, c, n in matrix.entries()} == {
            ("v1", "v1"): 1,
            ("v2", "v2"): 1,
            ("v3", "v3"): 1,
        }

    def test_unknown_relation(self, g2):
        graph, _ = g2
        with pytest.raises(UnknownRelationError):
            commuting_matrix(graph, parse_metapath("Venue -ghost-> Venue"))

    def test_nnz_budget(self, g2, p_star):
        graph, _ = g2
        with pytest.raises(BudgetExceededError, match="nnz"):
            commuting_matrix(graph, p_star, nnz_budget=1)


class TestEnumerateMetapaths:
    def test_g2_venue_venue(self, g2):
        graph, _ = g2
        paths = enumerate_metapaths(graph, "Venue", "Venue", 2)
        assert [str(p) for p in paths] == ["Object -publishIn~-> Object -publishIn-> Object"]

    def test_g2_venue_author(self, g2):
        graph, _ = g2
        paths = enumerate_metapaths(graph, "Venue", "Author", 2)
        assert [str(p) for p in paths] == ["Object -publishIn~-> Object -authorOf~-> Object"]

    def test_zero_max_len(self, g2):
        graph, _ = g2
        assert enumerate_metapaths(graph, "Venue", "Venue", 0) == []

    def test_unknown_type(self, g2):
        graph, _ = g2
        with pytest.raises(UnknownTypeError):
            enumerate_metapaths(graph, "Ghost", "Venue", 2)

    @pytest.mark.parametrize("seed", range(10))
    def test_every_sequence_is_realized(self, seed):
        graph, _ = random_typed_graph(seed, max_entities=12)
        for path in enumerate_metapaths(graph, "Object", "Object", 3):
            assert any(
                enumerate_path_instances(graph, source, path) for source in graph.entities
            )


@given(seed=st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_walk_mass_bounds(seed):
    graph, _ = random_typed_graph(seed, max_entities=10)
    for path in realized_paths(graph, max_len=2):
        for source in graph.entities:
            dist = walk_distribution(graph, source, path)
            assert all(0.0 < m <= 1.0 for m in dist.mass.values())
            assert dist.total() <= 1.0 + 1e-9
