from .votes import PHISHING, NOT_PHISHING, VERDICTS, VoteEntry, VoteMatrix
from .graph import VerifierGraph, build_verifier_graph
from .pagerank import EmptyGraphError, RankVector, pagerank
from .scoring import (
    MIN_VOTES_FOR_SCORE,
    MissingRankError,
    count_correct_votes,
    phish_score,
    score_timeline,
    skill_points,
)
from .dawid_skene import EmptyInputError, dawid_skene, posterior_e_step
from .glad import (
    NonFiniteGradientError,
    expected_loglik,
    expected_loglik_grad,
    glad,
    glad_posteriors,
)
from .synthetic import InvalidParamsError, LabeledDataset, SyntheticParams, generate_synthetic
from .evaluate import DomainMismatchError, EvaluationReport, evaluate
from .datasets import dataset_from_doc, dataset_to_doc, load_dataset, save_dataset
from .bench import (
    ALGORITHMS,
    BenchResult,
    BenchSpec,
    default_bench_spec,
    em_labels,
    glad_labels,
    majority_labels,
    pagerank_labels,
    run_bench,
)
