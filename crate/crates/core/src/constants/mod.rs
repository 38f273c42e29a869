//! Closed-form constants and their brute-force determination.

pub mod formulas;
pub mod report;
pub mod search;
pub mod verify;

pub use formulas::{conjecture_value, formula_modified_cyclic, formula_modified_square, harborth_bounds};
pub use report::{
    brute_force_modified_constant, check_lemma_por2p, random_zero_sum, CheckMode, ConstantReport,
    LengthRecord, Por2pReport, ReportStatus, DEFAULT_WINDOW,
};
pub use search::{
    check_length, enumerate_multisets, enumerate_task, enumerate_zero_sum_multisets, partition,
    EnumerationStats, EnumerationTask, LengthVerdict, SearchBudget, SearchConfig, SearchStrategy,
};
pub use verify::{lemma_3n, parse_list, verify_theorem, PropertyReport, Suite, SuiteRow, VerifyOutcome, VerifyParams};
