//! Calabi–Yau structures: traces, co-traces, bimodules, Hochschild cochains and cap products.

pub mod bimodule;
pub mod cap;
pub mod cochains;
pub mod proper;
pub mod smooth;

pub use bimodule::{diagonal_bimodule, dual_diagonal, yoneda_bimodule, AInfBimodule, BimoduleElement};
pub use cochains::{cochains_unchecked, hochschild_cochains, CochainCell, CochainComplex};
pub use proper::{strong_proper_cy_check, weak_proper_cy_check, Functional, PairingBlock, ProperReport, StrongProperReport, TraceData, UResidual};
pub use smooth::{smooth_cy_lift_check, weak_smooth_cy_check, CapBlock, CotraceData, SmoothLiftReport, SmoothReport};
