//! Action-centered information retrieval.
//!
//! Sources describe a story as a sequence of actions over an action
//! description with incomplete initial knowledge. A source matches a query
//! fluent when the story, possibly helped by a few explicit assumptions,
//! determines the truth of the fluent; the number of assumptions needed is
//! the source's semantic score, and sources are ranked by it.

pub mod asp;
pub mod bench;
pub mod corpus;
pub mod dot;
pub mod initial;
pub mod matcher;
pub mod parser;
pub mod semantics;
pub mod types;

pub use initial::Completion;
pub use matcher::{find_match, find_match_in, score, MatchError, MatchResult, MatchWitness, Score};
pub use parser::{parse_query, parse_source, parse_source_with_id, serialize_query, serialize_source, ParseError, SourceDocument};
pub use semantics::{Domain, Path, QualifiedActionSequence, Qualifier, SemanticError, StateSet};
pub use types::{
    complement, validate_source, Action, ActionDescription, ElementaryAction, ExtendedLiteral, Fluent,
    FluentLiteral, Law, Query, Signature, Source, Violation,
};
