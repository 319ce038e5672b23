import networkx as nx
import numpy as np

from qecon.exceptions import InvariantViolationError

__all__ = ['PropagationGraph']


class PropagationGraph(object):
    """Directed acyclic graph of fault propagation.

    An edge ``j -> i`` states that fault ``i`` was derived from fault ``j``
    (``j`` is a predecessor of ``i``). Detecting ``j`` removes ``i`` and every
    other transitive successor of ``j``.

    `PropagationGraph` wraps a `networkx.DiGraph` and mirrors the small part
    of its API the economics code needs.

    Parameters
    ----------
    faults : iterable of Fault, optional
        Faults to add; their `predecessors` become edges.

    """
    def __init__(self, faults=()):
        self._graph = nx.DiGraph()
        self._classes = {}
        for fault in faults:
            self.add_fault(fault.id, fault.doc_class)
        for fault in faults:
            for predecessor in fault.predecessors:
                self.add_edge(predecessor, fault.id)
        self.check()

    def add_fault(self, fault_id, doc_class=None):
        self._graph.add_node(fault_id)
        self._classes[fault_id] = doc_class

    def add_edge(self, predecessor, successor):
        if predecessor not in self._graph:
            raise InvariantViolationError(
                'Fault {} lists unknown predecessor {}'.format(
                    successor, predecessor), 'predecessors')
        self._graph.add_edge(predecessor, successor)

    def has_fault(self, fault_id):
        return fault_id in self._graph

    def faults(self):
        return list(self._graph.nodes())

    def number_of_faults(self):
        return self._graph.number_of_nodes()

    def number_of_edges(self):
        return self._graph.number_of_edges()

    def predecessors(self, fault_id):
        return set(self._graph.predecessors(fault_id))

    def ancestors(self, fault_id):
        """All faults `fault_id` was transitively derived from."""
        return nx.ancestors(self._graph, fault_id)

    def descendants(self, fault_id):
        """All faults removed along with `fault_id`."""
        return nx.descendants(self._graph, fault_id)

    def check(self):
        """Raise if the graph has a cycle or runs against the class order."""
        if not nx.is_directed_acyclic_graph(self._graph):
            cycle = nx.find_cycle(self._graph)
            raise InvariantViolationError(
                'Fault predecessors form a cycle: {}'.format(
                    ' -> '.join(str(edge[0]) for edge in cycle)),
                'predecessors')
        for predecessor, successor in self._graph.edges():
            first = self._classes.get(predecessor)
            second = self._classes.get(successor)
            if first is None or second is None:
                continue
            if first.rank > second.rank:
                raise InvariantViolationError(
                    'Fault {} ({}) cannot derive from fault {} ({}): '
                    'predecessors must live in earlier or equal document '
                    'classes'.format(successor, second.value, predecessor,
                                     first.value), 'predecessors')

    def closure_matrix(self, order):
        """Boolean matrix of the reflexive transitive predecessor relation.

        Parameters
        ----------
        order : sequence of int
            Fault ids giving the row and column order.

        Returns
        -------
        np.ndarray, shape=(n, n), dtype=bool
            ``closure[a, b]`` is True when fault ``order[b]`` is fault
            ``order[a]`` itself or one of its ancestors.

        """
        index = {fault_id: position for position, fault_id in enumerate(order)}
        closure = np.eye(len(order), dtype=bool)
        for fault_id, row in index.items():
            for ancestor in self.ancestors(fault_id):
                closure[row, index[ancestor]] = True
        return closure

    def __repr__(self):
        return '<PropagationGraph: {} faults, {} edges, id: {}>'.format(
            self.number_of_faults(), self.number_of_edges(), id(self))
