use super::comodule::Comodule;
use super::matrix::{self, Mat};
use crate::check::Check;
use crate::coeffring::Ring;
use crate::error::{Error, Result};
use crate::gseries::{Series, SeriesRing};
use crate::hopfalg::{CompositeHopf, HopfAlgebroid, SeriesHopf};

/// The Milnor operations `Q_0..Q_(n-1)` of a comodule over the exterior Hopf
/// algebra, as matrices of a right action: `(m_j)Q_i = Σ_k ops[i][j][k] m_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MilnorAction<B: Ring> {
    pub names: Vec<String>,
    pub parity: Vec<bool>,
    pub ops: Vec<Mat<B::Elem>>,
}

/// `(x)Q_i = (-1)^(|x|+1) x_i` where `ρ(x) = 1 ⊗ x + Σ_i b_(i) ⊗ x_i + ...`.
pub fn extract_milnor<B: Ring>(lambda: &SeriesHopf<B>, m: &Comodule<Series<B::Elem>>) -> MilnorAction<B> {
    let ring = lambda.gamma();
    let base = ring.base();
    let n = lambda.ngens();
    let ops = (0..n)
        .map(|i| {
            let mut e = vec![0i32; n];
            e[i] = 1;
            m.coaction
                .iter()
                .enumerate()
                .map(|(j, row)| {
                    row.iter()
                        .map(|g| {
                            let c = ring.coeff(g, &e);
                            if m.parity[j] {
                                c
                            } else {
                                base.neg(&c)
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    MilnorAction { names: m.names.clone(), parity: m.parity.clone(), ops }
}

impl<B: Ring> MilnorAction<B> {
    pub fn n(&self) -> usize {
        self.ops.len()
    }

    /// `Q_i Q_j + Q_j Q_i = 0` for all `i, j` (so `Q_i^2 = 0` when 2 is a unit).
    pub fn anticommutation_check(&self, base: &B) -> Check {
        for i in 0..self.n() {
            for j in i..self.n() {
                let s = matrix::add(base, &matrix::mul(base, &self.ops[i], &self.ops[j]), &matrix::mul(base, &self.ops[j], &self.ops[i]));
                let z = matrix::zeros(base, s.len(), s.len());
                if let Some((a, b)) = matrix::first_difference(base, &s, &z) {
                    return Check::fail(
                        "milnor_anticommute",
                        format!("Q{i}Q{j} + Q{j}Q{i} sends {} to a nonzero multiple of {}", self.names[a], self.names[b]),
                    );
                }
            }
        }
        Check::pass("milnor_anticommute")
    }

    /// `Σ_i q_i Q_i`.
    pub fn combination(&self, base: &B, q: &[B::Elem]) -> Mat<B::Elem> {
        let k = self.names.len();
        q.iter().zip(&self.ops).fold(matrix::zeros(base, k, k), |acc, (c, op)| matrix::add(base, &acc, &matrix::scale(base, op, c)))
    }

    /// `(Q_i)^g = Σ_{j ≥ i} a_{j-i}^(p^i) Q_j` for the witness `t(g) = Σ_k a_k X^(p^k)`.
    pub fn twisted(&self, base: &B, p: u64, a: &[B::Elem], i: usize) -> Mat<B::Elem> {
        let q: Vec<_> = (0..self.n())
            .map(|j| if j >= i && j - i < a.len() { base.pow(&a[j - i], p.pow(i as u32)) } else { base.zero() })
            .collect();
        self.combination(base, &q)
    }
}

/// `(x ⊗ y)Q_i = x ⊗ (y)Q_i + (-1)^|y| (x)Q_i ⊗ y` on every basis pair, with
/// the left side read off the tensor product comodule.
pub fn milnor_derivation_check<B: Ring>(
    lambda: &SeriesHopf<B>,
    m: &Comodule<Series<B::Elem>>,
    n: &Comodule<Series<B::Elem>>,
) -> Check {
    let base = lambda.base();
    let qm = extract_milnor(lambda, m);
    let qn = extract_milnor(lambda, n);
    let qt = extract_milnor(lambda, &m.tensor(n, lambda));
    let (rm, rn) = (m.rank(), n.rank());
    for i in 0..qt.n() {
        for j in 0..rm {
            for a in 0..rn {
                for k in 0..rm {
                    for b in 0..rn {
                        let mut want = base.zero();
                        if j == k {
                            want = base.add(&want, &qn.ops[i][a][b]);
                        }
                        if a == b {
                            let v = &qm.ops[i][j][k];
                            want = base.add(&want, &if n.parity[a] { base.neg(v) } else { v.clone() });
                        }
                        let got = &qt.ops[i][j * rn + a][k * rn + b];
                        if !base.eq_elem(got, &want) {
                            return Check::fail(
                                "milnor_derivation",
                                format!("Q{i} on {}⊗{}: coefficient of {}⊗{} is {} not {}", m.names[j], n.names[a], m.names[k], n.names[b], base.render(got), base.render(&want)),
                            );
                        }
                    }
                }
            }
        }
    }
    Check::pass("milnor_derivation")
}

/// The matrix of `g` on a comodule over the composite algebra, obtained by
/// evaluating the `C`-part of the coaction at `t_k = a_k`. Only strict
/// witnesses (`a_0 = 1`) are points of the formal `C`.
pub fn action_from_coaction<B: Ring>(h: &CompositeHopf<B>, m: &Comodule<Series<B::Elem>>, a: &[B::Elem]) -> Result<Mat<B::Elem>> {
    let base = h.gamma().base().clone();
    if a.is_empty() || !base.is_one(&a[0]) {
        return Err(Error::InvalidWitness("evaluation on the formal coaction needs a_0 = 1".into()));
    }
    let cg = h.c_part().gamma();
    let images: Vec<_> = (1..=h.tbound() as usize).map(|k| cg.constant(a.get(k).cloned().unwrap_or_else(|| base.zero()))).collect();
    let ev = |s: &Series<B::Elem>| -> Result<B::Elem> {
        let c = h.pi_c(s);
        Ok(cg.constant_term(&cg.substitute(&c, cg, &images, |x| x.clone())?))
    };
    m.coaction.iter().map(|row| row.iter().map(&ev).collect()).collect()
}

/// The twist law `((x)Q_i)g = ((x)g)(Q_i)^g` for a comodule over the
/// composite algebra, the action matrix of `g` and its witness
/// `t(g) = Σ_k a_k X^(p^k)`.
///
/// Also confirms the coefficients of `(Q_i)^g` against the action of `g^{-1}`
/// on the exterior generators: `(b_(j))(Q_i)^g` must be the `b_(i)`
/// coefficient of `b_(j)^(g^{-1})`.
pub fn milnor_twist_check<B: Ring>(
    h: &CompositeHopf<B>,
    m: &Comodule<Series<B::Elem>>,
    action: &Mat<B::Elem>,
    a: &[B::Elem],
) -> Result<Vec<Check>> {
    let base = h.gamma().base().clone();
    let n = h.n() as usize;
    if a.is_empty() || a.len() > n || base.inv(&a[0]).is_none() {
        return Err(Error::InvalidWitness(format!("t(g) needs 1..={n} coefficients with a unit leading one")));
    }
    let lam = project_lambda(h, m);
    let q = extract_milnor(h.lambda(), &lam);
    let mut law = Check::pass("milnor_twist_law");
    for i in 0..n {
        let lhs = matrix::mul(&base, &q.ops[i], action);
        let rhs = matrix::mul(&base, action, &q.twisted(&base, h.p(), a, i));
        if let Some((x, y)) = matrix::first_difference(&base, &lhs, &rhs) {
            law = Check::fail(
                "milnor_twist_law",
                format!("Q{i} then g differs from g then Q{i}^g on {}, coefficient of {}", m.names[x], m.names[y]),
            );
            break;
        }
    }
    // b^(g^{-1}) = b(t(g)(X)), i.e. the action through the witness of g^{-1}.
    let inv = h.invert_witness(a)?;
    let m_inv = h.act_on_lambda(&inv)?;
    let mut coeffs = Check::pass("milnor_twist_coefficients");
    'outer: for i in 0..n {
        for j in 0..n {
            let want = if j >= i && j - i < a.len() { base.pow(&a[j - i], h.p().pow(i as u32)) } else { base.zero() };
            if !base.eq_elem(&m_inv[j][i], &want) {
                coeffs = Check::fail(
                    "milnor_twist_coefficients",
                    format!("coefficient of Q{j} in Q{i}^g is {} by the formula, {} from the action", base.render(&want), base.render(&m_inv[j][i])),
                );
                break 'outer;
            }
        }
    }
    Ok(vec![law, coeffs])
}

/// `(π_Λ ⊗ 1) ∘ ρ` for a comodule over the composite algebra.
pub fn project_lambda<B: Ring>(h: &CompositeHopf<B>, m: &Comodule<Series<B::Elem>>) -> Comodule<Series<B::Elem>> {
    let coaction = m.coaction.iter().map(|row| row.iter().map(|g| h.pi_lambda(g)).collect()).collect();
    Comodule { names: m.names.clone(), parity: m.parity.clone(), coaction }
}

/// `(π_C ⊗ 1) ∘ ρ` for a comodule over the composite algebra.
pub fn project_c<B: Ring>(h: &CompositeHopf<B>, m: &Comodule<Series<B::Elem>>) -> Comodule<Series<B::Elem>> {
    let coaction = m.coaction.iter().map(|row| row.iter().map(|g| h.pi_c(g)).collect()).collect();
    Comodule { names: m.names.clone(), parity: m.parity.clone(), coaction }
}

/// Writes an odd derivation as `Σ_i q_i Q_i`, reading the coefficients off
/// the row of basis element `probe` and then confirming the whole matrix.
pub fn recognize_milnor<B: Ring>(q: &MilnorAction<B>, base: &B, op: &Mat<B::Elem>, probe: usize) -> Result<Vec<B::Elem>> {
    if probe >= q.names.len() {
        return Err(Error::IndexOutOfRange { index: probe, bound: q.names.len() });
    }
    let rows: Vec<_> = q.ops.iter().map(|m| m[probe].clone()).collect();
    let coeffs = matrix::solve_combination(base, &rows, &op[probe])?
        .ok_or_else(|| Error::CompatibilityFailure(format!("the image of {} is not a combination of the Q_i", q.names[probe])))?;
    let rebuilt = q.combination(base, &coeffs);
    if let Some((x, y)) = matrix::first_difference(base, &rebuilt, op) {
        return Err(Error::CompatibilityFailure(format!(
            "the operation agrees with a combination of the Q_i on {} but not on {} (coefficient of {})",
            q.names[probe], q.names[x], q.names[y]
        )));
    }
    Ok(coeffs)
}

/// The exterior algebra as a comodule over itself: basis the monomials
/// `b_S` in increasing index order, `ρ = ψ`.
pub fn exterior_regular<B: Ring>(lambda: &SeriesHopf<B>) -> Comodule<Series<B::Elem>> {
    let ring = lambda.gamma();
    let n = lambda.ngens();
    let basis: Vec<Vec<i32>> = (0..1u32 << n).map(|s| (0..n).map(|i| ((s >> i) & 1) as i32).collect()).collect();
    let names = basis.iter().map(|e| monomial_name(ring, e)).collect();
    let parity = basis.iter().map(|e| e.iter().sum::<i32>() % 2 == 1).collect();
    let coaction = basis
        .iter()
        .map(|e| {
            let psi = lambda.psi(&ring.monomial(e.clone(), ring.base().one()));
            split_pair(ring, n, &psi, &basis)
        })
        .collect();
    Comodule { names, parity, coaction }
}

fn monomial_name<B: Ring>(ring: &SeriesRing<B>, e: &[i32]) -> String {
    let s = ring.render_exp(e);
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// Splits `Σ c ⊗ b_T` in a two-factor ring (left factor on `nleft` variables)
/// into the coefficients of each right basis monomial.
pub(crate) fn split_pair<B: Ring>(left: &SeriesRing<B>, nleft: usize, f: &Series<B::Elem>, basis: &[Vec<i32>]) -> Vec<Series<B::Elem>> {
    let mut out = vec![Series::default(); basis.len()];
    for (e, c) in &f.terms {
        let (l, r) = e.split_at(nleft);
        let k = basis.iter().position(|b| b[..] == r[..]).expect("right factor lies in the basis");
        out[k] = left.add(&out[k], &left.monomial(l.to_vec(), c.clone()));
    }
    out
}
