//! The Givental–Hori–Vafa disk potential as a formal Laurent polynomial.
//!
//! For a small-index word the potential is
//! `Σ_{γ} y^{w_γ} + Σ_j q_{i_j} y^{v_j}` in the chamber coordinates, with
//! one `y` variable per node and one `q` variable per simple root. The
//! weight is kept symbolic through the `q` prefactors.

use crate::moves;
use crate::polytope::lambda_row_m;
use crate::weyl::ReducedWord;
use crate::wiring::{enumerate_rigorous_paths, WiringDiagram};
use crate::{Error, Result};
use serde::Serialize;

/// One monomial `q^{q_exp} · y^{y_exp}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PotentialTerm {
    pub y_exp: Vec<i64>,
    pub q_exp: Vec<i64>,
}

/// Formal sum of Laurent monomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LaurentPotential {
    pub terms: Vec<PotentialTerm>,
}

/// The disk potential of a small-index word. Path terms come first
/// (ordered by source and maximal peak, as enumerated), then one term per
/// node.
pub fn disk_potential(word: &ReducedWord) -> Result<LaurentPotential> {
    if moves::has_small_indices(word).is_none() {
        return Err(Error::NotSmallIndices);
    }
    let n = word.rank();
    let diagram = WiringDiagram::build(word);
    let paths = enumerate_rigorous_paths(&diagram);
    let nbar = diagram.nbar;
    let mut terms = Vec::with_capacity(paths.len() + nbar);
    for p in &paths {
        terms.push(PotentialTerm { y_exp: p.w_m.clone(), q_exp: vec![0; n] });
    }
    for j in 1..=nbar {
        let mut q_exp = vec![0; n];
        q_exp[word.letters()[j - 1] - 1] = 1;
        terms.push(PotentialTerm { y_exp: lambda_row_m(word, j), q_exp });
    }
    Ok(LaurentPotential { terms })
}

/// Deterministic text rendering, e.g. `y1y3y5 + q1/(y1y4)`.
pub fn render_text(potential: &LaurentPotential) -> String {
    let term_str = |t: &PotentialTerm| -> String {
        let mut num = String::new();
        for (i, &e) in t.q_exp.iter().enumerate() {
            for _ in 0..e {
                num.push_str(&format!("q{}", i + 1));
            }
        }
        let mut den = String::new();
        let mut den_vars = 0;
        for (j, &e) in t.y_exp.iter().enumerate() {
            if e > 0 {
                for _ in 0..e {
                    num.push_str(&format!("y{}", j + 1));
                }
            } else if e < 0 {
                for _ in 0..-e {
                    den.push_str(&format!("y{}", j + 1));
                    den_vars += 1;
                }
            }
        }
        match (num.is_empty(), den.is_empty()) {
            (true, true) => "1".to_string(),
            (false, true) => num,
            (true, false) => format!("1/{}", if den_vars > 1 { format!("({den})") } else { den }),
            (false, false) => format!("{num}/{}", if den_vars > 1 { format!("({den})") } else { den }),
        }
    };
    potential.terms.iter().map(term_str).collect::<Vec<_>>().join(" + ")
}

/// JSON rendering.
pub fn render_json(potential: &LaurentPotential) -> String {
    serde_json::to_string(potential).expect("potential serializes")
}
