//! Size budgets for ball construction and closure enumeration.

/// Limits applied by the enumerative operations. The CLI reads
/// `QMEDIA_BUDGET` to override `ball_vertices`.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Maximum number of vertices in a constructed ball.
    pub ball_vertices: usize,
    /// Maximum number of elements in a permutation/word closure.
    pub closure: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            ball_vertices: 100_000,
            closure: 1_000_000,
        }
    }
}

impl Budget {
    pub fn with_ball_vertices(mut self, n: usize) -> Self {
        self.ball_vertices = n;
        self
    }

    /// Budget from the `QMEDIA_BUDGET` environment variable, when set and parseable.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Ok(v) = std::env::var("QMEDIA_BUDGET") {
            if let Ok(n) = v.trim().parse::<usize>() {
                b.ball_vertices = n;
            }
        }
        b
    }
}
