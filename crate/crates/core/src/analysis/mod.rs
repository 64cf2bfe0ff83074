//! Group-theoretic analysis of window groups.

pub mod lemmas;
pub mod search;
pub mod series;
pub mod subgroup;

pub use lemmas::{
    abelian_iff_single_shift, abelian_iff_single_shift_visible, bilinearity, commutator_shrinks,
    cutoff_alternation, lemma_checks, normal_form_lemmas, oracle_equivalence,
    shift_invariant_closure, ShiftClosure, DEFAULT_SAMPLES, DEFAULT_SEED,
};
pub use search::{
    extends, find_extension, search_tables, search_tables_each, SearchConfig, SearchHit,
    SearchStats,
};
pub use series::{
    derived_series, lower_central_series, lower_cutoff_example, lower_cutoff_window,
    nilpotency_class, single_shift_extends, CutoffResult,
};
pub use subgroup::{
    commutator_subgroup, commutator_subgroup_brute, generate, normal_closure, whole_group,
    Subgroup, SubgroupSummary,
};
