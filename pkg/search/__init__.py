# __init__.py
from search.brute_force import best_in_cone_projection, brute_force_optimum
from search.cone_graph import ConeGraph, cone_graph
from search.exact import DpEdgeLabel, exact_search
from search.extended import extended_upgma
from search.neighbors import chain_neighbors, intermediate_partitions
from search.results import SearchResult, SearchStats
