//! Suite configuration, parameter sweeps, suite execution and report and
//! profile emission.

mod config;
mod profiles;
mod suite;

pub use config::{
    parse_config, radii_arity, serialize_config, FamilyKind, OutputFormat, OutputSpec, SuiteConfig, SweepPoint,
};
pub use profiles::{emit_profiles, write_profiles, PROFILE_HEADER};
pub use suite::{
    build_space, default_radii, load_config, params_hash, run_suite, write_document, SuiteDocument, SuiteHeader,
    SuiteIssue,
};
