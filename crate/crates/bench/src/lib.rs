//! Shared inputs for the evaluator benchmarks.

use qmg_core::{ComplexValue, QParam};

/// `(q, r, z)` cases covering small and large `q` and both half-planes.
pub fn cases() -> Vec<(&'static str, QParam, u32, ComplexValue)> {
    vec![
        (
            "q0.5_r2_z1.3+0.4i",
            QParam::new(0.5).unwrap(),
            2,
            ComplexValue::new(1.3, 0.4),
        ),
        (
            "q0.9_r3_z2.5-1i",
            QParam::new(0.9).unwrap(),
            3,
            ComplexValue::new(2.5, -1.0),
        ),
        (
            "q0.2_r4_z0.7",
            QParam::new(0.2).unwrap(),
            4,
            ComplexValue::new(0.7, 0.0),
        ),
    ]
}
