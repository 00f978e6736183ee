//! Exact information-theoretic measures of learning over finite universes.
//!
//! The crate enumerates the joint law of an `(n+1)`-example supersample, a
//! uniformly held-out coordinate, and a learner's exact output law, and from
//! that computes leave-one-out conditional mutual information and its
//! relatives, the one-inclusion graph rule with a flow-based bounded
//! out-degree orientation, and a verification suite that checks every bound
//! and identity tying these quantities to risk.
//!
//! Layering, bottom up:
//! - [`num`], [`domain`], [`hypothesis`], [`distribution`], [`sample`],
//!   [`loss`]: the finite universe (rationals, domains, classes, laws).
//! - [`learner`], [`learners`], [`oig`], [`flow`]: learning rules exposing
//!   exact output laws; the one-inclusion graph machinery.
//! - [`pmf`], [`infotheory`]: entropies, divergences, and the measure
//!   engine that enumerates supersamples.
//! - [`bounds`]: every bound/identity evaluator and its verifier.
//! - [`config`], [`experiment`], [`corpus`]: experiment ingestion, reports,
//!   and the bundled desk-scale corpus.

pub mod bounds;
pub mod config;
pub mod corpus;
pub mod distribution;
pub mod domain;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod hypothesis;
pub mod infotheory;
pub mod learner;
pub mod learners;
pub mod loss;
pub mod num;
pub mod oig;
pub mod pmf;
pub mod sample;

pub use error::{Error, Result};
