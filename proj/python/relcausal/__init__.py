"""Causal interpretation of encoding/decoding feature relevance."""

from relcausal._core import (  # noqa: F401
    CapacityError,
    CiProvider,
    Dag,
    Dataset,
    DegenerateDataError,
    FaithfulnessError,
    InputError,
    Scm,
    analyze,
    binarize,
    calibrate,
    canonical_fixture,
    canonical_fixture_names,
    ci_provider,
    conditional_g_test,
    consistent_structures,
    count_dags,
    d_separated,
    decoding_relevant_set,
    encoding_relevant_set,
    enumerate_dags,
    graph_oracle,
    implied_ci_statements,
    load_scm,
    oracle,
    parse_dag,
    parse_scm,
    partial_correlation,
    rfe_decoding_set,
    sample,
    shared_edges,
    __version__,
)
