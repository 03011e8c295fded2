//! Scalar float helpers routed through `libm` so the crate builds without std
//! and produces identical bits on every platform.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn max(a: f64, b: f64) -> f64 {
    if a >= b { a } else { b }
}

#[inline]
pub(crate) fn min(a: f64, b: f64) -> f64 {
    if a <= b { a } else { b }
}
