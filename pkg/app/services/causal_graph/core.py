"""
Global causal graph service.

This module merges per-sentence knowledge graphs into one disconnected global
graph, locates concept nodes by lemma or vector similarity, and enumerates the
complete source-to-destination paths through it.
"""

import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
import torch
import torch.nn.functional as F

from app.core.constants import DEFAULT_MAX_HOPS
from app.core.logging import log_event
from app.schemas.causal_graph import (
    ConceptQuery,
    GlobalGraph,
    GraphEdge,
    GraphNode,
    PathStep,
    TraversalPath,
    TraversalResult,
    node_id,
)
from app.schemas.graph import AttributeLabel, EntitySpan, KnowledgeGraph, RelationEdge
from app.services.encoder import TextEncoder, maxpool
from app.services.extractor import SpearModel
from app.utils.exceptions import ConfigError, MergeError, NotFoundError

from .lemmatizer import lemmatize_text, lemmatize_tokens

logger = logging.getLogger(__name__)

NodeLike = Union[GraphNode, str]


def _ids(nodes: Iterable[NodeLike]) -> Set[str]:
    return {n.id if isinstance(n, GraphNode) else n for n in nodes}


class CausalGraphService:
    """
    Merge, concept matching and traversal over global causal graphs.

    Graphs are immutable; every operation here is read-only on its inputs.
    """

    @staticmethod
    def merge_graphs(graphs: Sequence[Tuple[str, KnowledgeGraph]]) -> GlobalGraph:
        """
        Disjoint union of sentence graphs.

        Args:
            graphs: (sentence id, graph) pairs

        Returns:
            GlobalGraph whose node, edge and attribute counts are the sums of the inputs

        Raises:
            MergeError: If a sentence id repeats or a graph repeats an entity or relation
        """
        sentences: Dict[str, Tuple[str, ...]] = {}
        nodes: List[GraphNode] = []
        edges: List[GraphEdge] = []

        for sentence_id, graph in graphs:
            if sentence_id in sentences:
                raise MergeError(f"Duplicate sentence id '{sentence_id}'")
            sentences[sentence_id] = graph.tokens

            if len(set(graph.entities)) != len(graph.entities):
                raise MergeError(f"Sentence '{sentence_id}' repeats an entity")
            if len(set(graph.relations)) != len(graph.relations):
                raise MergeError(f"Sentence '{sentence_id}' repeats a relation")

            for entity in graph.entities:
                nodes.append(GraphNode(
                    sentence_id=sentence_id,
                    start=entity.start,
                    end=entity.end,
                    entity_type=entity.entity_type,
                    attributes=tuple(graph.attributes_of(entity)),
                    surface=graph.surface(entity),
                ))
            for relation in graph.relations:
                edges.append(GraphEdge(
                    sentence_id=sentence_id,
                    head=node_id(sentence_id, *relation.head.span, relation.head.entity_type),
                    tail=node_id(sentence_id, *relation.tail.span, relation.tail.entity_type),
                    relation_type=relation.relation_type,
                ))

        merged = GlobalGraph(sentences=sentences, nodes=tuple(nodes), edges=tuple(edges))
        log_event(
            logger,
            "graphs_merged",
            sentences=len(sentences),
            nodes=len(merged.nodes),
            edges=len(merged.edges),
            attributes=merged.attribute_count,
        )
        return merged

    @staticmethod
    def sentence_graph(graph: GlobalGraph, sentence_id: str) -> KnowledgeGraph:
        """
        Recover the knowledge graph of one merged sentence.

        Raises:
            NotFoundError: If the sentence id was never merged
        """
        if sentence_id not in graph.sentences:
            raise NotFoundError("Sentence", sentence_id)

        entities: Dict[str, EntitySpan] = {}
        attributes: List[AttributeLabel] = []
        for node in graph.nodes:
            if node.sentence_id != sentence_id:
                continue
            entity = EntitySpan(start=node.start, end=node.end, entity_type=node.entity_type)
            entities[node.id] = entity
            attributes.extend(AttributeLabel(entity=entity, attribute_type=a) for a in node.attributes)

        relations = [
            RelationEdge(head=entities[edge.head], tail=entities[edge.tail], relation_type=edge.relation_type)
            for edge in graph.edges
            if edge.sentence_id == sentence_id
        ]
        return KnowledgeGraph(
            tokens=graph.sentences[sentence_id],
            entities=tuple(entities.values()),
            attributes=tuple(attributes),
            relations=tuple(relations),
        )

    @staticmethod
    def to_networkx(graph: GlobalGraph) -> nx.MultiDiGraph:
        """MultiDiGraph view; edges are keyed by edge id and carry the GraphEdge."""
        view = nx.MultiDiGraph()
        for node in graph.nodes:
            view.add_node(node.id, node=node)
        for edge in graph.edges:
            view.add_edge(edge.head, edge.tail, key=edge.id, edge=edge)
        return view

    @staticmethod
    def match_concepts(
        query: ConceptQuery,
        graph: GlobalGraph,
        encoder: Optional[Union[TextEncoder, SpearModel]] = None,
    ) -> FrozenSet[GraphNode]:
        """
        Nodes matching a concept query.

        Lemma mode matches a node whose span contains every lemma of the query
        (case-insensitive). Vector mode matches a node whose maxpooled span
        vector, encoded in its own sentence, has cosine similarity at least
        query.threshold with the maxpooled query vector.

        Args:
            query: Concept query
            graph: Global graph to search
            encoder: Encoder (or trained model, whose encoder is used) for vector mode

        Raises:
            ConfigError: If vector mode is requested without an encoder
        """
        if query.matcher == "lemma":
            wanted = set(lemmatize_text(query.text))
            if not wanted:
                return frozenset()
            matches = frozenset(
                node for node in graph.nodes
                if wanted <= set(lemmatize_tokens(graph.sentences[node.sentence_id][node.start:node.end + 1]))
            )
        else:
            matches = CausalGraphService._match_vectors(query, graph, encoder)

        log_event(logger, "concepts_matched", query=query.text, matcher=query.matcher, matches=len(matches))
        return matches

    @staticmethod
    def _match_vectors(
        query: ConceptQuery,
        graph: GlobalGraph,
        encoder: Optional[Union[TextEncoder, SpearModel]],
    ) -> FrozenSet[GraphNode]:
        if isinstance(encoder, SpearModel):
            encoder = encoder.encoder
        if encoder is None:
            raise ConfigError("Vector matching needs an encoder or a trained model")

        query_tokens = query.text.split()
        matches = []
        with torch.no_grad():
            query_vector = maxpool(encoder.encode(query_tokens).vectors)
            encoded = {}
            for node in graph.nodes:
                if node.sentence_id not in encoded:
                    encoded[node.sentence_id] = encoder.encode(graph.sentences[node.sentence_id])
                node_vector = maxpool(encoded[node.sentence_id].vectors[node.start:node.end + 1])
                similarity = F.cosine_similarity(node_vector, query_vector, dim=0).item()
                if similarity >= query.threshold:
                    matches.append(node)
        return frozenset(matches)

    @staticmethod
    def find_paths(
        sources: Iterable[NodeLike],
        destinations: Iterable[NodeLike],
        graph: GlobalGraph,
        max_hops: int = DEFAULT_MAX_HOPS,
    ) -> List[TraversalPath]:
        """
        All simple paths of at most max_hops edges from a source to a destination.

        Each hop may follow an edge forward (head to tail) or in reverse; the
        orientation is recorded on the step. A node in both sets yields the
        trivial zero-hop path. Paths may pass through other destinations.

        Returns:
            Paths sorted by hop count, then node sequence

        Raises:
            ValueError: If max_hops < 1
        """
        if max_hops < 1:
            raise ValueError("max_hops must be at least 1")

        view = CausalGraphService.to_networkx(graph)
        source_ids = sorted(_ids(sources) & set(view.nodes))
        destination_ids = _ids(destinations) & set(view.nodes)
        paths: List[TraversalPath] = []

        def walk(current: str, nodes: List[str], steps: List[PathStep]) -> None:
            if current in destination_ids:
                paths.append(TraversalPath(nodes=tuple(nodes), steps=tuple(steps)))
            if len(steps) == max_hops:
                return
            hops = [(tail, data["edge"], True) for _, tail, data in view.out_edges(current, data=True)]
            hops += [(head, data["edge"], False) for head, _, data in view.in_edges(current, data=True)]
            for neighbor, edge, forward in sorted(hops, key=lambda h: (h[0], h[1].id, h[2])):
                if neighbor in nodes:
                    continue
                nodes.append(neighbor)
                steps.append(PathStep(edge=edge, forward=forward))
                walk(neighbor, nodes, steps)
                nodes.pop()
                steps.pop()

        for source in source_ids:
            walk(source, [source], [])

        paths.sort(key=TraversalPath.sort_key)
        logger.debug(f"Found {len(paths)} paths from {len(source_ids)} sources to {len(destination_ids)} destinations")
        return paths

    @staticmethod
    def prune_to_paths(paths: Iterable[TraversalPath], graph: GlobalGraph) -> GlobalGraph:
        """Subgraph made of exactly the nodes and edges lying on the given paths."""
        keep_nodes: Set[str] = set()
        keep_edges: Set[str] = set()
        for path in paths:
            keep_nodes.update(path.nodes)
            keep_edges.update(step.edge.id for step in path.steps)

        nodes = tuple(n for n in graph.nodes if n.id in keep_nodes)
        kept_sentences = {n.sentence_id for n in nodes}
        return GlobalGraph(
            sentences={sid: tokens for sid, tokens in graph.sentences.items() if sid in kept_sentences},
            nodes=nodes,
            edges=tuple(e for e in graph.edges if e.id in keep_edges),
        )

    @staticmethod
    def traverse(
        source: ConceptQuery,
        destination: ConceptQuery,
        graph: GlobalGraph,
        max_hops: int = DEFAULT_MAX_HOPS,
        encoder: Optional[Union[TextEncoder, SpearModel]] = None,
    ) -> TraversalResult:
        """
        Match both concepts, enumerate the paths between them and prune the graph.

        Returns:
            TraversalResult holding the paths and the pruned graph
        """
        sources = CausalGraphService.match_concepts(source, graph, encoder)
        destinations = CausalGraphService.match_concepts(destination, graph, encoder)
        paths = CausalGraphService.find_paths(sources, destinations, graph, max_hops)
        result = TraversalResult(
            source=source.text,
            destination=destination.text,
            paths=tuple(paths),
            graph=CausalGraphService.prune_to_paths(paths, graph),
        )
        log_event(
            logger,
            "traversal_completed",
            source=source.text,
            destination=destination.text,
            sources=len(sources),
            destinations=len(destinations),
            paths=len(paths),
            trivial_paths=sum(1 for p in paths if p.trivial),
        )
        return result
