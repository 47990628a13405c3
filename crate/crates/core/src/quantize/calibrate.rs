//! Pins the sign conventions by exact linear algebra:
//! ι is the unique linear map into span{x, y, z} with dΦ_1 ∘ ι = π_1, and the
//! ω-bracket sign is the one making ι a Lie algebra homomorphism.
//! `render` produces the committed `conventions.rs`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::geometric::d_phi;
use super::spin::{iota, mat2, mat2_commutator, spin_rep, Mat2, Su2Element};
use crate::error::{Error, Result};
use crate::harmonics::{kks_bracket, SpherePoly};
use crate::linalg;
use crate::scalar::{gi, Gaussian};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conventions {
    pub bracket_sign: i64,
    /// 2·ι as (re, im) on rows x, y, z and columns a, b, c, d.
    pub iota_doubled: [[(i64, i64); 4]; 3],
}

/// ι(ξ) as coordinates on (x, y, z), solved from dΦ_1(ι ξ) = π_1(ξ).
fn solve_iota(xi: &Mat2) -> Result<[Gaussian; 3]> {
    let images: Vec<Vec<Gaussian>> = (0..3)
        .map(|axis| d_phi::<BigRational>(1, &SpherePoly::coord(axis)).map(|d| d.entries().to_vec()))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Gaussian>> = (0..4)
        .map(|e| images.iter().map(|img| img[e].clone()).collect())
        .collect();
    let rhs = spin_rep::<BigRational>(1, xi)?.entries().to_vec();
    let sol = linalg::solve(&rows, &rhs)?;
    Ok([sol[0].clone(), sol[1].clone(), sol[2].clone()])
}

fn coords_to_poly(c: &[Gaussian; 3]) -> SpherePoly {
    (0..3).fold(SpherePoly::zero(), |acc, axis| {
        &acc + &SpherePoly::coord(axis).scale(&c[axis])
    })
}

fn as_half_integer(v: &BigRational) -> Result<i64> {
    let d = v * BigRational::from_integer(2.into());
    if !d.is_integer() {
        return Err(Error::Inconsistent);
    }
    d.to_integer().try_into().map_err(|_| Error::Inconsistent)
}

pub fn calibrate() -> Result<Conventions> {
    let basis = Su2Element::basis();
    let values: Vec<[Gaussian; 3]> = basis
        .iter()
        .map(|xi| solve_iota(xi.matrix()))
        .collect::<Result<_>>()?;

    // Extend to gl(2) by ι(I) = 0: the map M (3×4) satisfies M·E = V with
    // E the basis (h, e, f, I) written in (a, b, c, d) coordinates.
    let identity = mat2(Gaussian::one(), Gaussian::zero(), Gaussian::zero(), Gaussian::one());
    let gl_basis: Vec<Mat2> = basis
        .iter()
        .map(|b| b.matrix().clone())
        .chain(std::iter::once(identity))
        .collect();
    let e: Vec<Vec<Gaussian>> = (0..4)
        .map(|row| {
            gl_basis
                .iter()
                .map(|m| m[row / 2][row % 2].clone())
                .collect()
        })
        .collect();
    let e_inv = linalg::invert(&e)?;
    let mut iota_doubled = [[(0i64, 0i64); 4]; 3];
    for axis in 0..3 {
        for col in 0..4 {
            let mut v = Gaussian::zero();
            for (p, vals) in values.iter().enumerate() {
                v += &vals[axis] * &e_inv[p][col];
            }
            iota_doubled[axis][col] = (as_half_integer(&v.re)?, as_half_integer(&v.im)?);
        }
    }

    // Bracket sign from {ι ξ, ι η}_ω = ι[ξ, η] with {·,·}_ω = s·2·KKS.
    let (h, e_) = (&basis[0], &basis[1]);
    let lhs = kks_bracket(&coords_to_poly(&values[0]), &coords_to_poly(&values[1]))
        .scale(&gi(2, 0));
    let rhs = coords_to_poly(&solve_iota(&mat2_commutator(h.matrix(), e_.matrix()))?);
    let bracket_sign = if lhs == rhs {
        1
    } else if lhs == -&rhs {
        -1
    } else {
        return Err(Error::Inconsistent);
    };
    Ok(Conventions {
        bracket_sign,
        iota_doubled,
    })
}

/// Source text of `conventions.rs`.
pub fn render(c: &Conventions) -> String {
    let mut s = String::new();
    s.push_str("// Generated by `calibrate::render` from the exact calibration in calibrate.rs.\n");
    s.push_str("// Regenerate with FUZZYLOOP_BLESS=1 cargo test -p fuzzyloop-core conventions_file.\n\n");
    s.push_str("/// Global sign s in {f, g}_ω = s · 2 · {f, g}_KKS.\n");
    s.push_str(&format!("pub const BRACKET_SIGN: i64 = {};\n\n", c.bracket_sign));
    s.push_str("/// 2·ι on gl(2) as (re, im) pairs: rows x, y, z; columns a, b, c, d of [[a, b], [c, d]].\n");
    s.push_str("pub const IOTA_DOUBLED: [[(i64, i64); 4]; 3] = [\n");
    for row in &c.iota_doubled {
        let cells: Vec<String> = row.iter().map(|(re, im)| format!("({re}, {im})")).collect();
        s.push_str(&format!("    [{}],\n", cells.join(", ")));
    }
    s.push_str("];\n");
    s
}

/// Check that the committed constants reproduce dΦ_k ∘ ι = π_k on the su(2)
/// basis for every level up to `kmax`. Returns the first failing level.
pub fn verify_diagram(kmax: u32) -> Result<Option<u32>> {
    for k in 1..=kmax {
        for xi in Su2Element::basis() {
            let lhs = d_phi::<BigRational>(k, &iota(xi.matrix()))?;
            if lhs != spin_rep::<BigRational>(k, xi.matrix())? {
                return Ok(Some(k));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantize::conventions::{BRACKET_SIGN, IOTA_DOUBLED};

    #[test]
    fn conventions_file() {
        let c = calibrate().unwrap();
        let text = render(&c);
        if std::env::var_os("FUZZYLOOP_BLESS").is_some() {
            let path = concat!(env!("CARGO_MANIFEST_DIR"), "/src/quantize/conventions.rs");
            std::fs::write(path, &text).unwrap();
        }
        assert_eq!(c.bracket_sign, BRACKET_SIGN);
        assert_eq!(c.iota_doubled, IOTA_DOUBLED);
        assert_eq!(text, include_str!("conventions.rs"));
    }

    #[test]
    fn diagram_is_exact() {
        assert_eq!(verify_diagram(12).unwrap(), None);
    }
}
