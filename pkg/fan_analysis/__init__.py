# __init__.py
from fan_analysis.census import ORBIT_TABLE, CellCensus, OrbitSummary, TopologyAction, cell_census, q4_census
from fan_analysis.cone_set import ConeSet, projection_cone_set
from fan_analysis.probe import ProbeResult, conjecture_probe
from fan_analysis.witness import comb_witness
