//! Dense and banded symmetric kernels used by the eigensolvers.

pub mod dense;
pub mod skyline;
pub mod tridiag;
