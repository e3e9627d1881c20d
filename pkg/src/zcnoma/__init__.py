"""Max-min power scaling for two-user NOMA over a Gaussian Z-channel with
PAM/QAM inputs, with Farey-sequence closed forms, brute-force oracles and a
Monte Carlo link simulator."""

from .channel import (ChannelError, ComplexZcChannel, NoiseModel, PamConstellation,
                      RealZcInstance, SumConstellation, allocate_power, decompose,
                      pam_points, power_cap, sum_constellation)
from .distance import (DifferencePair, DistanceError, DistanceReport, InapplicableBound, d1,
                       mediant_gap_bound, min_distance_bruteforce, min_distance_farey)
from .farey import (FareyError, FareyInterval, Fraction, IntervalPartition,
                    extended_farey_sequence, farey_intervals, farey_sequence, mediant,
                    partition_intervals)
from .sim import BerCurve, FadingSpec, SimConfig, ml_detect_d1, ml_detect_d2, run_baseline, run_ber
from .solver import (Scenario, ScalingSolution, classify, interval_best, oracle_solve, solve,
                     solve_complex, solve_interval)

__version__ = "0.1.0"
