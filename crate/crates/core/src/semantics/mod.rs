//! Transition semantics of the action language.

mod domain;
mod nondeterminism;
mod transition;

pub use domain::{ActionId, ActionSet, Assignment, Domain, DomainError, FluentId, Lit, StateSet, Value};
pub use nondeterminism::{all_states, check_emergent_nondeterminism, CheckConfig, NondeterminismReport, Witness};
pub use transition::{
    branching_degree, entails, join, Path, QualifiedActionSequence, QualifiedStep, Qualifier, SemanticError,
    Target,
};
