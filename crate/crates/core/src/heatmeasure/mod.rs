//! Heat-kernel probability measures on `Z`, their infinite products over
//! the dyadics, and the Kakutani dichotomy for transformed products.

mod kakutani;
mod profile;
mod theta;

pub use kakutani::{
    closure_diagnostic, closure_window, kakutani_series, kakutani_term, radon_nikodym, rotation_support,
    semifinite_series, semifinite_term, summability_test, Evidence, KakutaniReport, SemifiniteReport,
    Summability, Verdict,
};
pub use profile::{BetaProfile, Transform, ZfrElement};
pub use theta::{
    hellinger_pair, hellinger_translate, log_mass_interval, log_partition_function, mass, mass_set,
    neg_log_hellinger_pair, neg_log_hellinger_translate, partition_function,
};
