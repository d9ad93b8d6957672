from .matrices import Contraction, HermitianMatrix
from .combinatorics import CycleType, ExponentSet, Field, MultiIndex, Partition
from .kernel import HuaBellmanMatrix
from .metric import DecompositionResult, DistanceValue, MetricKind, MobiusPair, ScalarChainResult
