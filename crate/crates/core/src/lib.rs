//! Permutation groups, stabilizer chains, derived and lower central series,
//! and the wreath-product families used to compare derived length with
//! composition length.

pub mod analytics;
pub mod bsgs;
pub mod constructors;
pub mod error;
pub mod factor;
pub mod families;
pub mod ledger;
pub mod perm;
pub mod series;
pub mod wreath;

pub use bsgs::{coset_action, CosetAction, PermutationGroup, StabilizerChain};
pub use error::{GroupError, Result};
pub use factor::{factorize, Factorization};
pub use families::{family, family_report, FamilyLabel, GroupReport};
pub use perm::Permutation;
pub use series::{derived_length, derived_series, lower_central_series, SeriesReport};
pub use wreath::{iterated_wreath, wreath};
