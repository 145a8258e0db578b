"""Non-model machinery for social-media text pipelines: preprocessing,
joint-label marginalization, voting ensembles, a BIO span codec,
shared-task evaluation metrics and a lexicon normalizer."""

from .classifier import (
    FeatureVector,
    ModelParams,
    TrainConfig,
    featurize,
    fnv1a_64,
    load_model,
    loss_and_grad,
    predict_proba,
    save_model,
    train,
)
from .ensemble import PredictionSet, ensemble_predictions, majority_vote
from .errors import (
    AlignmentError,
    CoverageError,
    DataError,
    DegenerateMarginalsError,
    DivergenceError,
    IntegrityError,
    InvalidDistributionError,
    InvalidSpansError,
    KeyMismatchError,
    ParseError,
    ShapeError,
    TweetpipeError,
    UnknownLabelError,
    UsageError,
)
from .labels import (
    JOINT_LABELS,
    JOINT_LABEL_NAMES,
    JointDistribution,
    JointLabel,
    Premise,
    Stance,
    decide,
    marginalize_premise,
    marginalize_stance,
    parse_joint_label,
)
from .metrics import (
    AgreementMatrix,
    ConfusionMatrix,
    Metrics,
    agreement_matrix,
    classification_metrics,
    cohens_kappa,
    confusion,
    normalization_metrics,
    span_metrics,
)
from .normalizer import (
    Lexicon,
    build_lexicon,
    load_lexicon,
    normalize_mention,
    save_lexicon,
)
from .preprocess import (
    Lang,
    NormalizedText,
    format_claim_input,
    map_span_to_normalized,
    map_span_to_original,
    normalize_text,
)
from .records import (
    LabeledRecord,
    TermAnnotation,
    read_label_predictions,
    read_records,
    read_span_predictions,
    read_term_predictions,
    write_label_predictions,
    write_records,
    write_span_predictions,
    write_term_predictions,
)
from .report import EvalReport
from .spans import BioTag, Span, Token, decode_bio, encode_bio, tokenize

__version__ = "0.1.0"
