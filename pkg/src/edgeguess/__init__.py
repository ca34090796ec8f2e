"""Who can tell which end of an edge they are standing on?

Two players sit on the endpoints of one edge of a known graph.  Each sees
the other's vertex but not their own and may announce it once they are
sure.  This package labels trees with the time and direction of the first
correct announcement, predicts the game from rooted heights, checks every
prediction against a possible-worlds simulation, reduces the directed game
to the undirected one and builds a pre-agreed strategy under which both
players learn.
"""

from .directed import (CandidateSets, SplitGraph, admissible_placements, analyze_directed,
                       analyze_directed_all, candidate_sets, is_zigzag_forest, split)
from .errors import (GameError, InvalidLabelingError, NotATreeError, ParseError, PlacementError,
                     PreconditionError)
from .graph import (Bipartition, GameGraph, bipartition, format_edge_list, heights, is_connected,
                    is_forest, is_tree, parse_edge_list, read_edge_list)
from .labeling import (SIMULTANEOUS, EdgeLabel, Labeling, Playbook, SpeechMode, adapt_mode,
                       cut_leaves_labeling, guessing_player, playbook_from_labeling,
                       validate_labeling)
from .oracle import OracleTrace, Outcome, World, simulate, simulate_all, simulate_with_playbook
from .preagreed import both_players_labeling, edge_bijection, parse_edge_order, verify_both_learn
from .predictor import Prediction, parity_heights, predict, predict_all, second_guesser

__version__ = "0.1.0"
