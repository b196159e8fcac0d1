//! Receiver route classification by template matching.
//!
//! Tracking data goes through [`ingest`] into canonical routes, [`classify`]
//! matches each route against a [`templates::TemplateSet`], and
//! [`evaluate`] scores the labels against a reference.

pub mod classify;
pub mod evaluate;
pub mod geometry;
pub mod ingest;
pub mod jsonl;
pub mod label;
pub mod plot;
pub mod synth;
pub mod templates;

pub use classify::{classify_batch, classify_route, Classifier, ClassifyConfig, Gamma, MatchResult};
pub use evaluate::{score, EvalReport, LabeledPair, ReferenceLabel};
pub use geometry::{Point, Polyline};
pub use ingest::{CanonicalRoute, RouteId};
pub use label::{Label, RouteLabel};
pub use synth::{generate, generate_corpus, CorpusPlan, SynthSpec};
pub use templates::{builtin_route_tree, Template, TemplateSet};
