//! Exact-rational toolkit for finite normed chain complexes: minimal ℓ¹/ℓ∞
//! fillings with duality certificates, uniform boundary condition constants,
//! group-theoretic cochain models, nerves of covers and glueing estimates.

pub mod exactlp;
pub mod format;
pub mod gluecalc;
pub mod groupcx;
pub mod nervekit;
pub mod normcx;
pub mod prng;
pub mod rational;
pub mod simplicial;

pub use exactlp::{FillResult, FillStatus, Norm, SparseMat, SparseVec};
pub use rational::{q, Rational};
