"""Two-hand static gesture classification and a gesture-driven bar service."""

from .dataset import (
    DEFAULT_CLASS_COUNTS,
    DatasetError,
    GestureLabel,
    GestureTemplate,
    LabeledDataset,
    default_templates,
    generate_synthetic,
    kfold_partitions,
    load_dataset,
    load_templates,
    parse_label,
    save_dataset_csv,
    stratified_split,
    stratified_subset,
)
from .estimators import (
    KnnGestureClassifier,
    MlpGestureClassifier,
    MlrGestureClassifier,
    ModelFormatError,
    ModelKind,
    ModelVersionError,
    Prediction,
    gradient_check,
    load_model,
    make_classifier,
    save_model,
    softmax,
    train_model,
)
from .frames import (
    FINGER_ORDER,
    HandFrame,
    HandObservation,
    InvalidFrameError,
    Point2D,
    extract_features,
    fingertip_distance,
    normalize_hand,
    read_frames_jsonl,
    write_frames_jsonl,
)
from .harness import (
    KFoldResult,
    LearningCurve,
    LearningCurvePoint,
    SplitValidationResult,
    run_kfold,
    run_learning_curve,
    run_split_validation,
)
from .metrics import (
    ClassificationReport,
    ConfusionMatrix,
    classification_report,
    confusion_matrix,
    round_half_up,
)
from .projection import PlanarPca, jacobi_eigh
from .session import (
    GestureOutcome,
    OrderPhase,
    OrderSession,
    SessionStore,
    apply_gesture,
    apply_prediction,
    classify_and_apply,
    replay,
)

__version__ = "0.1.0"
