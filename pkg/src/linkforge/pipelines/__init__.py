"""Constructive pipelines over link systems, plus the vertex-count bounds."""
from .bounds import bipartite_stage_sizes, bound_bipartite, bound_key_q, bound_keydisc, vertex_budget_check
from .keyring import (BipartiteTrace, KeyRingInstance, KeyRingModelFailure, KeyRingResult,
                      SearchKeyRingOracle, StageShortfall, SymbolicKeyRingOracle,
                      bipartite_orchestrate, keyring_search, replay_bipartite)
from .stitch import (PipelineTrace, ReplayError, StitchInput, minimal_sizes, random_stitch_input,
                     replay_matches, replay_stitch, stitch_links)
from .suppliers import ConstantSupplier, SeededSupplier, TableSupplier, supplier_from_json
from .theorem import (HSystem, TheoremTrace, check_property, modq_step_parameters,
                      replay_theorem, synthesize_h_system, theorem_modq_orchestrate)
from .twocomponent import TwoComponentTrace, enlarge_key, replay_two_component, two_component_pipeline
