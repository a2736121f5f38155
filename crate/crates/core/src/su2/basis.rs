//! Admissible spine colorings — the combinatorial bases of the TQFT
//! spaces.
//!
//! Fixed spine conventions (lex-ordered enumeration throughout):
//!
//! * genus 1 — a loop edge `a` with a trivial (or `λ`-colored) leg;
//!   colorings `[a]` with `(a, a, λ)` admissible.
//! * genus 2 — the theta graph with edges `(x1, x3, x5)` and two
//!   vertices, both `(x1, x3, x5)`; with a boundary the middle edge is
//!   split into `(c, c′)` with a leg vertex `(c, c′, λ)`, colorings
//!   `[x1, c, c′, x5]`.
//! * genus 3 — the chain spine with colorings `[a, s1, c, d, s2, b]` and
//!   vertices `(a,a,s1)`, `(s1,c,d)`, `(c,d,s2)`, `(s2,b,b)`; with a
//!   boundary the `d` edge is split: `[a, s1, c, d, d′, s2, b]` with
//!   vertices `(a,a,s1)`, `(s1,c,d)`, `(d,d′,λ)`, `(c,d′,s2)`,
//!   `(s2,b,b)`.

use crate::error::{Error, Result};
use crate::su2::root::RootData;

/// Enumerated admissible colorings of a fixed spine.
#[derive(Debug, Clone)]
pub struct ColoredBasis {
    pub g: u32,
    pub k: u32,
    pub boundary: Option<u32>,
    /// Human-readable description of the spine and coloring layout.
    pub spine: String,
    /// Lexicographically ordered colorings; inner layout per `spine`.
    pub colorings: Vec<Vec<u32>>,
}

impl ColoredBasis {
    pub fn dim(&self) -> usize {
        self.colorings.len()
    }
}

/// Exhaustive admissible-coloring enumeration for `g ∈ {1,2,3}`.
pub fn admissible_colorings(g: u32, k: u32, boundary: Option<u32>) -> Result<ColoredBasis> {
    let rd = RootData::new(k)?;
    let lam = boundary.unwrap_or(0);
    if lam > k {
        return Err(Error::Domain(format!("boundary label {lam} outside 0..={k}")));
    }
    let r = 0..=k;
    let mut colorings = Vec::new();
    let spine = match g {
        1 => {
            for a in r.clone() {
                if rd.admissible(a, a, lam) {
                    colorings.push(vec![a]);
                }
            }
            "loop edge a with leg lambda; coloring [a], vertex (a,a,lambda)"
        }
        2 => {
            if boundary.is_none() {
                for x1 in r.clone() {
                    for x3 in r.clone() {
                        for x5 in r.clone() {
                            if rd.admissible(x1, x3, x5) {
                                colorings.push(vec![x1, x3, x5]);
                            }
                        }
                    }
                }
                "theta graph; coloring [x1,x3,x5], vertices (x1,x3,x5) twice"
            } else {
                for x1 in r.clone() {
                    for c in r.clone() {
                        for cp in r.clone() {
                            for x5 in r.clone() {
                                if rd.admissible(x1, c, x5)
                                    && rd.admissible(x1, cp, x5)
                                    && rd.admissible(c, cp, lam)
                                {
                                    colorings.push(vec![x1, c, cp, x5]);
                                }
                            }
                        }
                    }
                }
                "theta graph, split middle edge with leg; coloring [x1,c,c',x5], \
                 vertices (x1,c,x5),(x1,c',x5),(c,c',lambda)"
            }
        }
        3 => {
            if boundary.is_none() {
                for a in r.clone() {
                    for s1 in r.clone() {
                        if !rd.admissible(a, a, s1) {
                            continue;
                        }
                        for c in r.clone() {
                            for d in r.clone() {
                                if !rd.admissible(s1, c, d) {
                                    continue;
                                }
                                for s2 in r.clone() {
                                    if !rd.admissible(c, d, s2) {
                                        continue;
                                    }
                                    for b in r.clone() {
                                        if rd.admissible(s2, b, b) {
                                            colorings.push(vec![a, s1, c, d, s2, b]);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                "chain spine; coloring [a,s1,c,d,s2,b], vertices \
                 (a,a,s1),(s1,c,d),(c,d,s2),(s2,b,b)"
            } else {
                for a in r.clone() {
                    for s1 in r.clone() {
                        if !rd.admissible(a, a, s1) {
                            continue;
                        }
                        for c in r.clone() {
                            for d in r.clone() {
                                if !rd.admissible(s1, c, d) {
                                    continue;
                                }
                                for dp in r.clone() {
                                    if !rd.admissible(d, dp, lam) {
                                        continue;
                                    }
                                    for s2 in r.clone() {
                                        if !rd.admissible(c, dp, s2) {
                                            continue;
                                        }
                                        for b in r.clone() {
                                            if rd.admissible(s2, b, b) {
                                                colorings.push(vec![a, s1, c, d, dp, s2, b]);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                "chain spine, split d edge with leg; coloring [a,s1,c,d,d',s2,b], \
                 vertices (a,a,s1),(s1,c,d),(d,d',lambda),(c,d',s2),(s2,b,b)"
            }
        }
        _ => {
            return Err(Error::Domain(format!("unsupported genus {g} (supported: 1, 2, 3)")));
        }
    };
    Ok(ColoredBasis { g, k, boundary, spine: spine.to_string(), colorings })
}
