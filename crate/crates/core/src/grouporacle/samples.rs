//! Named small settings used by the verification suites.

use super::block::{build_block_setting, standard_z};
use super::clifford::CliffordSetting;
use super::field::make_field;
use super::group::generate_labeled;
use super::{Caps, OracleError};
use crate::exactalg::numtheory::divisors;

/// Q_8 = ⟨i, j⟩ ⊂ SL_2(F_3) over its centre, K = Z/2 × Z/2.
pub fn quaternion(caps: Caps) -> Result<CliffordSetting, OracleError> {
    let f = make_field(3, 1)?;
    let gens = [(vec![0, 1, 2, 0], [1, 0]), (vec![1, 1, 1, 2], [0, 1])];
    let (g, labels) = generate_labeled(&f, 2, &gens, [2, 2], caps.max_group_order)?;
    CliffordSetting::new(g, labels, [2, 2], caps)
}

/// Unitriangular 3×3 matrices over F_3 (extraspecial of order 27) over the
/// centre, K = Z/3 × Z/3.
pub fn heisenberg(caps: Caps) -> Result<CliffordSetting, OracleError> {
    let f = make_field(3, 1)?;
    let gens = [(vec![1, 1, 0, 0, 1, 0, 0, 0, 1], [1, 0]), (vec![1, 0, 0, 0, 1, 1, 0, 0, 1], [0, 1])];
    let (g, labels) = generate_labeled(&f, 3, &gens, [3, 3], caps.max_group_order)?;
    CliffordSetting::new(g, labels, [3, 3], caps)
}

/// SL_2(F_3) ⊂ GL_2(F_3), K = Z/2 through the determinant.
pub fn sl2_in_gl2(caps: Caps) -> Result<CliffordSetting, OracleError> {
    let f = make_field(3, 1)?;
    let gens = [(vec![1, 1, 0, 1], [0, 0]), (vec![1, 0, 1, 1], [0, 0]), (vec![2, 0, 0, 1], [1, 0])];
    let (g, labels) = generate_labeled(&f, 2, &gens, [2, 1], caps.max_group_order)?;
    CliffordSetting::new(g, labels, [2, 1], caps)
}

/// (n, A, B, q) with A = n (so G_0 = GL_1), q in `qs`, n ≤ 4, B | n, n | q-1,
/// and |G| = nB(q-1)^{n-1} within the group-order cap.
pub fn block_parameters(qs: &[u32], caps: Caps) -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    for &q in qs {
        for n in (2..=4u32).filter(|n| (q - 1) % n == 0) {
            for b in divisors(n as u64).into_iter().map(|b| b as u32) {
                let order = (n * b) as u64 * (q as u64 - 1).pow(n - 1);
                if order <= caps.max_group_order as u64 {
                    out.push((n, n, b, q));
                }
            }
        }
    }
    out
}

/// A named setting with a central element z ∈ H (as an index into G).
pub struct NamedSetting {
    pub name: String,
    pub setting: CliffordSetting,
    pub z: u32,
}

fn central(s: &CliffordSetting, entries: &[u32]) -> Result<u32, OracleError> {
    s.group()
        .index_of(entries)
        .ok_or_else(|| OracleError::Inconsistent("sample element missing from its group".into()))
}

/// Q_8, the Heisenberg group, SL_2(F_3) ⊂ GL_2(F_3), then every block setting
/// from `block_parameters(qs)`.
pub fn named_settings(qs: &[u32], caps: Caps) -> Result<Vec<NamedSetting>, OracleError> {
    let mut out = Vec::new();
    let q8 = quaternion(caps)?;
    let z = central(&q8, &[2, 0, 0, 2])?;
    out.push(NamedSetting { name: "Q8".into(), setting: q8, z });
    let heis = heisenberg(caps)?;
    let z = central(&heis, &[1, 0, 1, 0, 1, 0, 0, 0, 1])?;
    out.push(NamedSetting { name: "Heisenberg 27".into(), setting: heis, z });
    let sl = sl2_in_gl2(caps)?;
    let z = central(&sl, &[2, 0, 0, 2])?;
    out.push(NamedSetting { name: "SL2(3) in GL2(3)".into(), setting: sl, z });
    for (n, a, b, q) in block_parameters(qs, caps) {
        let bs = build_block_setting(n, a, b, q, caps)?;
        let z = standard_z(&bs);
        out.push(NamedSetting { name: format!("block n={n} A={a} B={b} q={q}"), setting: bs.setting, z });
    }
    Ok(out)
}
