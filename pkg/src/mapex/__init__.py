"""mapex: grid-world indoor exploration with prediction-aided mapping."""
from .grid import (FREE, OBSTACLE, UNKNOWN, encode_one_hot, decode_one_hot,
                   load_grid, save_grid, fraction_of_walls)
from .worldgen import GeneratorConfig, generate_floorplan, generate_dataset
from .sensing import (SensorRig, sense, accumulate, observe, tree_observations,
                      empty_observation)
from .predictor import (ThresholdConfig, threshold, synthesize, null_predict,
                        oracle_predict, NullPredictor, OraclePredictor)
from .neuralnet import (PredictorWeights, LayerSpec, conv2d, transposed_conv2d,
                        forward, load_weights, save_weights, LearnedPredictor,
                        architecture, random_weights)
from .planner import (PlannerState, shortest_paths, detect_frontier,
                      plan_random, plan_nearest_frontier, plan_cost_utility,
                      failsafe_check, reconstruct_path)
from .mission import (MissionConfig, MissionRecord, run_mission, f1_score,
                      run_benchmark, summarize_benchmark, evaluate_f1_curve,
                      coverage_of, resolve_predictor, start_pose)

__version__ = "0.1.0"
