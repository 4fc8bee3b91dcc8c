"""
Pruebas para CausalGraphService

Unión de grafos por oración, búsqueda de conceptos y enumeración de caminos.
"""

import random

import networkx as nx
import pytest

from app.schemas.causal_graph import ConceptQuery, GlobalGraph, GraphEdge, GraphNode, node_id
from app.schemas.graph import EntitySpan, KnowledgeGraph
from app.services.causal_graph import CausalGraphService, lemmatize
from app.services.causal_graph.lemmatizer import lemmatize_text, lemmatize_tokens
from app.services.encoder import HashingEncoder
from app.services.extractor import SpearModel
from app.utils.exceptions import ConfigError, MergeError, NotFoundError


def _merge(corpus) -> GlobalGraph:
    return CausalGraphService.merge_graphs([(s.sentence_id, s.gold) for s in corpus])


def _line_graph(n: int, edges) -> GlobalGraph:
    """Single-sentence graph over nodes w0..w{n-1}; edges are (head, tail, type) index triples."""
    tokens = tuple(f"w{i}" for i in range(n))
    nodes = tuple(
        GraphNode(sentence_id="s", start=i, end=i, entity_type="factor", surface=tokens[i]) for i in range(n)
    )
    return GlobalGraph(
        sentences={"s": tokens},
        nodes=nodes,
        edges=tuple(
            GraphEdge(sentence_id="s", head=nodes[h].id, tail=nodes[t].id, relation_type=rel) for h, t, rel in edges
        ),
    )


def _relations(path):
    return [(step.edge.relation_type, step.forward) for step in path.steps]


# ============================================================================
# ✅ CASOS EXITOSOS
# ============================================================================

def test_merge_counts(claims_corpus, ethnographic_corpus):
    """
    ID: CGR-001
    Nombre: La unión suma nodos, aristas y atributos sin aristas entre oraciones
    """
    merged = _merge(list(claims_corpus) + list(ethnographic_corpus))

    assert len(merged.sentences) == 6
    assert len(merged.nodes) == 14 + 15
    assert len(merged.edges) == 14 + 12
    assert merged.attribute_count == 3 + 2 + 9
    assert all(e.head.split("/")[0] == e.tail.split("/")[0] == e.sentence_id for e in merged.edges)


def test_merge_two_sentences(movement_sentence, ethnographic_corpus):
    """
    ID: CGR-002
    Nombre: Unir un grafo de 5 nodos con uno de 4 da 9 nodos
    """
    prevent = ethnographic_corpus[0]

    merged = CausalGraphService.merge_graphs([
        (movement_sentence.sentence_id, movement_sentence.gold),
        (prevent.sentence_id, prevent.gold),
    ])
    view = CausalGraphService.to_networkx(merged)

    assert view.number_of_nodes() == 9
    assert view.number_of_edges() == 8
    assert nx.number_weakly_connected_components(view) == 2


def test_sentence_graph_round_trip(ethnographic_corpus):
    """
    ID: CGR-003
    Nombre: Recuperar cada oración de la unión
    """
    merged = _merge(ethnographic_corpus)

    for sentence in ethnographic_corpus:
        assert CausalGraphService.sentence_graph(merged, sentence.sentence_id) == sentence.gold


def test_lemmatizer_variants():
    """
    ID: CGR-004
    Nombre: Formas flexionadas y derivadas comparten la misma clave
    """
    assert {lemmatize(w) for w in ["pray", "prays", "prayed", "prayer", "prayers", "Prayed"]} == {"pray"}
    assert lemmatize("pregnancy") == lemmatize("pregnant") == "pregnant"
    assert lemmatize("reduced") == lemmatize("reduces") == lemmatize("reduce")
    assert lemmatize("stopped") == "stop"
    assert lemmatize("illness") == "illness"
    assert lemmatize_text("Movement restriction!") == ["movement", "restriction"]
    assert lemmatize_tokens([",", "prayed", "."]) == ["pray"]


def test_lemma_matching(ethnographic_corpus):
    """
    ID: CGR-005
    Nombre: "pray" encuentra prayed y prayers; "pregnant" encuentra pregnancy
    """
    merged = _merge(ethnographic_corpus)

    prays = CausalGraphService.match_concepts(ConceptQuery(text="pray"), merged)
    pregnant = CausalGraphService.match_concepts(ConceptQuery(text="Pregnant"), merged)
    both = CausalGraphService.match_concepts(ConceptQuery(text="safe pregnancy"), merged)

    assert {n.surface for n in prays} == {"prayed", "prayers"}
    assert len(prays) == 3
    assert {n.surface for n in pregnant} == {"pregnancy", "pregnant women", "during pregnancy"}
    assert both == frozenset()


def test_lemma_matching_is_reflexive(ethnographic_corpus):
    """
    ID: CGR-006
    Nombre: Todo nodo coincide con su propio texto
    """
    merged = _merge(ethnographic_corpus)

    for node in merged.nodes:
        assert node in CausalGraphService.match_concepts(ConceptQuery(text=node.surface), merged)


def test_vector_matching(ethnographic_corpus, tiny_config):
    """
    ID: CGR-007
    Nombre: Coincidencia por similitud coseno con un codificador
    """
    merged = _merge(ethnographic_corpus)
    encoder = HashingEncoder(dim=16)
    expected = {"prevent-complications/4-4/concept", "safe-pregnancy/1-1/concept"}

    close = CausalGraphService.match_concepts(ConceptQuery(text="prayed", matcher="vector"), merged, encoder)
    everything = CausalGraphService.match_concepts(
        ConceptQuery(text="prayed", matcher="vector", threshold=-1.0), merged, encoder
    )
    via_model = CausalGraphService.match_concepts(
        ConceptQuery(text="prayed", matcher="vector"), merged, SpearModel(tiny_config, HashingEncoder(dim=16))
    )

    assert expected <= {n.id for n in close}
    assert everything == frozenset(merged.nodes)
    assert via_model == close


def test_chain_has_single_path():
    """
    ID: CGR-008
    Nombre: En a -> b -> c hay exactamente un camino de dos saltos
    """
    graph = _line_graph(3, [(0, 1, "q+"), (1, 2, "q+")])
    a, _, c = graph.nodes

    paths = CausalGraphService.find_paths({a}, {c}, graph)

    assert len(paths) == 1
    assert paths[0].hops == 2
    assert paths[0].nodes[0] == a.id and paths[0].nodes[-1] == c.id
    assert all(step.forward for step in paths[0].steps)
    assert CausalGraphService.find_paths({a}, {c}, graph, max_hops=1) == []


def test_reverse_edges_are_followed():
    """
    ID: CGR-009
    Nombre: Las aristas se recorren en ambos sentidos registrando la orientación
    """
    graph = _line_graph(2, [(0, 1, "arg0")])
    a, b = graph.nodes

    paths = CausalGraphService.find_paths({b.id}, {a.id}, graph)

    assert len(paths) == 1
    assert _relations(paths[0]) == [("arg0", False)]


def test_trivial_path():
    """
    ID: CGR-010
    Nombre: Un nodo que es origen y destino produce un camino trivial
    """
    graph = _line_graph(2, [(0, 1, "q+")])
    a, _ = graph.nodes

    result = CausalGraphService.traverse(ConceptQuery(text="w0"), ConceptQuery(text="w0"), graph)

    assert len(result.paths) == 1
    assert result.paths[0].trivial
    assert result.paths[0].nodes == (a.id,)
    assert len(result.graph.nodes) == 1
    assert result.graph.edges == ()


def test_pray_to_pregnant_traversal(ethnographic_corpus):
    """
    ID: CGR-011
    Nombre: De "pray" a "pregnant" hay un camino directo y dos de dos saltos
    """
    merged = _merge(ethnographic_corpus)

    result = CausalGraphService.traverse(ConceptQuery(text="pray"), ConceptQuery(text="pregnant"), merged)

    assert [p.hops for p in result.paths] == [1, 2, 2]
    direct = result.paths[0]
    assert direct.nodes == ("safe-pregnancy/1-1/concept", "safe-pregnancy/5-5/concept")
    assert _relations(direct) == [("forPurpose", True)]
    assert {_relations(p)[0] for p in result.paths[1:]} == {("q+", True)}
    assert len(result.graph.nodes) == 6
    assert len(result.graph.edges) == 5
    assert set(result.graph.sentences) == {"safe-pregnancy", "faith-and-hope"}


def test_pray_to_complications_path(ethnographic_corpus):
    """
    ID: CGR-012
    Nombre: prayed -forPurpose-> prevent -q- -> any complications
    """
    merged = _merge(ethnographic_corpus)

    result = CausalGraphService.traverse(ConceptQuery(text="pray"), ConceptQuery(text="complications"), merged)

    assert len(result.paths) == 1
    assert [merged.node(n).surface for n in result.paths[0].nodes] == ["prayed", "prevent", "any complications"]
    assert _relations(result.paths[0]) == [("forPurpose", True), ("q-", True)]


def test_movement_to_infections_paths(claims_corpus):
    """
    ID: CGR-013
    Nombre: Camino q- directo y camino a través de la asociación
    """
    merged = _merge(claims_corpus)

    result = CausalGraphService.traverse(
        ConceptQuery(text="Movement restriction"), ConceptQuery(text="infections"), merged
    )

    assert len(result.paths) == 2
    assert _relations(result.paths[0]) == [("q-", True)]
    assert _relations(result.paths[1]) == [("arg0", False), ("arg1", True)]
    assert merged.node(result.paths[1].nodes[1]).surface == "reduced"


def test_pruning_is_a_fixed_point(ethnographic_corpus):
    """
    ID: CGR-014
    Nombre: Podar el grafo podado no cambia nada
    """
    merged = _merge(ethnographic_corpus)
    sources = CausalGraphService.match_concepts(ConceptQuery(text="pray"), merged)
    destinations = CausalGraphService.match_concepts(ConceptQuery(text="pregnant"), merged)
    paths = CausalGraphService.find_paths(sources, destinations, merged)

    pruned = CausalGraphService.prune_to_paths(paths, merged)

    assert CausalGraphService.prune_to_paths(paths, pruned) == pruned
    assert CausalGraphService.find_paths(sources, destinations, pruned) == paths


def test_paths_match_networkx_enumeration():
    """
    ID: CGR-015
    Nombre: Caminos iguales a los de networkx sobre grafos aleatorios
    """
    rng = random.Random(23)
    for _ in range(200):
        n = rng.randint(2, 6)
        edges = set()
        for _ in range(rng.randint(0, 8)):
            h, t = rng.sample(range(n), 2)
            edges.add((h, t, rng.choice(["q+", "q-", "arg0"])))
        graph = _line_graph(n, sorted(edges))
        ids = [node.id for node in graph.nodes]
        sources = set(rng.sample(ids, rng.randint(1, n)))
        destinations = set(rng.sample(ids, rng.randint(1, n)))
        max_hops = rng.randint(1, 4)

        paths = CausalGraphService.find_paths(sources, destinations, graph, max_hops)
        found = sorted((p.nodes[0], tuple(s.edge.id for s in p.steps)) for p in paths)

        undirected = nx.MultiGraph()
        undirected.add_nodes_from(ids)
        for edge in graph.edges:
            undirected.add_edge(edge.head, edge.tail, key=edge.id)
        expected = [(s, ()) for s in sources & destinations]
        for s in sources:
            for t in destinations - {s}:
                for edge_path in nx.all_simple_edge_paths(undirected, s, t, cutoff=max_hops):
                    expected.append((s, tuple(key for _, _, key in edge_path)))

        assert found == sorted(expected)


# ============================================================================
# ❌ CASOS DE ERROR
# ============================================================================

def test_merge_duplicate_sentence_id(movement_sentence):
    """
    ID: CGR-016
    Nombre: Id de oración repetido lanza MergeError
    """
    with pytest.raises(MergeError) as exc:
        CausalGraphService.merge_graphs([("x", movement_sentence.gold), ("x", movement_sentence.gold)])

    assert exc.value.exit_code == 2


def test_merge_repeated_entity():
    """
    ID: CGR-017
    Nombre: Entidad repetida dentro de una oración lanza MergeError
    """
    entity = EntitySpan(start=0, end=0, entity_type="factor")
    graph = KnowledgeGraph(tokens=("a",), entities=(entity, entity))

    with pytest.raises(MergeError):
        CausalGraphService.merge_graphs([("s", graph)])


def test_sentence_graph_unknown_id(ethnographic_corpus):
    """
    ID: CGR-018
    Nombre: Oración inexistente lanza NotFoundError
    """
    with pytest.raises(NotFoundError):
        CausalGraphService.sentence_graph(_merge(ethnographic_corpus), "missing")


def test_vector_matching_without_encoder(ethnographic_corpus):
    """
    ID: CGR-019
    Nombre: Modo vectorial sin codificador lanza ConfigError
    """
    with pytest.raises(ConfigError):
        CausalGraphService.match_concepts(ConceptQuery(text="pray", matcher="vector"), _merge(ethnographic_corpus))


def test_invalid_queries():
    """
    ID: CGR-020
    Nombre: Consulta vacía, umbral fuera de rango o max_hops < 1
    """
    graph = _line_graph(2, [(0, 1, "q+")])

    with pytest.raises(ValueError):
        ConceptQuery(text="   ")
    with pytest.raises(ValueError):
        ConceptQuery(text="pray", threshold=1.5)
    with pytest.raises(ValueError):
        CausalGraphService.find_paths(graph.nodes, graph.nodes, graph, max_hops=0)
    assert node_id("s", 0, 0, "factor") == graph.nodes[0].id
