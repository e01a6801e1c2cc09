//! Limits on exhaustive searches. Operations fail loudly past their budget
//! rather than falling back to approximation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest vertex count accepted by the exhaustive graph invariants.
    pub max_vertices: usize,
    /// Largest number of elementary decodability checks a code search may
    /// perform; searches report their exact space size when refusing.
    pub max_checks: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_vertices: 30, max_checks: 1 << 33 }
    }
}

impl Budget {
    pub fn with_max_checks(max_checks: u64) -> Self {
        Self { max_checks, ..Self::default() }
    }

    pub fn check_vertices(&self, vertices: usize) -> Result<()> {
        if vertices > self.max_vertices {
            return Err(Error::VertexBudgetExceeded { vertices, budget: self.max_vertices });
        }
        Ok(())
    }

    pub fn check_search_space(&self, space: u128) -> Result<()> {
        if space > self.max_checks as u128 {
            return Err(Error::SearchBudgetExceeded { space, budget: self.max_checks });
        }
        Ok(())
    }
}
