use num_bigint::BigInt;
use num_traits::Zero;
use std::sync::OnceLock;

use rustc_hash::{FxHashMap, FxHashSet};

use super::chartab::{character_table, CharacterTable, Reduction};
use super::group::{GroupTable, Label};
use super::matrix::{self, Matrix};
use super::{Caps, OracleError};
use crate::exactalg::numtheory::lcm;
use crate::exactalg::CyclotomicInteger;

/// An extension 1 → H → G → K → 1 with K a subgroup of Z/A × Z/B, given by a
/// labelling of the elements of G.
pub struct CliffordSetting {
    g: GroupTable,
    labels: Vec<Label>,
    moduli: [u32; 2],
    h: GroupTable,
    h_table: CharacterTable,
    h_to_g: Vec<u32>,
    g_to_h: Vec<u32>,
    image: Vec<Label>,
    lifts: FxHashMap<Label, u32>,
    caps: Caps,
    h_mul: OnceLock<Option<Vec<u32>>>,
}

/// Largest H whose multiplication table is cached for histograms.
const H_TABLE_MAX: usize = 4096;

impl std::fmt::Debug for CliffordSetting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CliffordSetting(|G| = {}, |H| = {}, K in Z/{} x Z/{})", self.g.order(), self.h.order(), self.moduli[0], self.moduli[1])
    }
}

fn label_add(moduli: [u32; 2], a: Label, b: Label) -> Label {
    [(a[0] + b[0]) % moduli[0], (a[1] + b[1]) % moduli[1]]
}

/// Subgroup of Z/A × Z/B generated by `gens`.
fn label_span(moduli: [u32; 2], gens: &[Label]) -> FxHashSet<Label> {
    let mut span = FxHashSet::default();
    span.insert([0, 0]);
    let mut frontier = vec![[0, 0]];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = label_add(moduli, x, s);
            if span.insert(y) {
                frontier.push(y);
            }
        }
    }
    span
}

impl CliffordSetting {
    pub fn new(g: GroupTable, labels: Vec<Label>, moduli: [u32; 2], caps: Caps) -> Result<Self, OracleError> {
        if labels.len() != g.order() {
            return Err(OracleError::InvalidParameters("one label per element required".into()));
        }
        let kernel: Vec<Matrix> =
            (0..g.order()).filter(|&i| labels[i] == [0, 0]).map(|i| g.element(i as u32).clone()).collect();
        let h = GroupTable::from_elements(g.field(), g.dim(), &kernel)?;
        let h_table = character_table(&h)?;
        let h_to_g: Vec<u32> = h.elements().iter().map(|m| g.index_of(m).expect("kernel element")).collect();
        let mut g_to_h = vec![u32::MAX; g.order()];
        for (i, &x) in h_to_g.iter().enumerate() {
            g_to_h[x as usize] = i as u32;
        }
        let mut lifts = FxHashMap::default();
        for (i, &l) in labels.iter().enumerate() {
            lifts.entry(l).or_insert(i as u32);
        }
        let mut image: Vec<Label> = lifts.keys().copied().collect();
        image.sort_unstable();
        if image.len() * h.order() != g.order() {
            return Err(OracleError::InconsistentLabels);
        }
        Ok(Self { g, labels, moduli, h, h_table, h_to_g, g_to_h, image, lifts, caps, h_mul: OnceLock::new() })
    }

    /// The classical setting H = G, K = 1.
    pub fn trivial_quotient(g: GroupTable, caps: Caps) -> Result<Self, OracleError> {
        let labels = vec![[0, 0]; g.order()];
        Self::new(g, labels, [1, 1], caps)
    }

    pub fn group(&self) -> &GroupTable {
        &self.g
    }

    pub fn subgroup(&self) -> &GroupTable {
        &self.h
    }

    pub fn subgroup_table(&self) -> &CharacterTable {
        &self.h_table
    }

    pub fn moduli(&self) -> [u32; 2] {
        self.moduli
    }

    /// The elements of K, sorted.
    pub fn image(&self) -> &[Label] {
        &self.image
    }

    pub fn k_size(&self) -> usize {
        self.image.len()
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn label(&self, x: u32) -> Label {
        self.labels[x as usize]
    }

    /// The least-index element of G over `label`.
    pub fn lift(&self, label: Label) -> Option<u32> {
        self.lifts.get(&label).copied()
    }

    pub fn h_index(&self, x: u32) -> Option<u32> {
        let i = self.g_to_h[x as usize];
        (i != u32::MAX).then_some(i)
    }

    pub fn g_index(&self, h: u32) -> u32 {
        self.h_to_g[h as usize]
    }

    fn lift_or_err(&self, label: Label) -> Result<u32, OracleError> {
        self.lift(label).ok_or_else(|| OracleError::InvalidParameters(format!("{label:?} is not in K")))
    }

    /// Whether the coordinates of the given labels generate K.
    pub fn generates(&self, labels: &[Label]) -> bool {
        label_span(self.moduli, labels).len() == self.k_size()
    }

    /// Permutation of the classes of H induced by conjugation with `x`.
    fn class_action(&self, x: u32) -> Vec<usize> {
        let cl = self.h_table.classes();
        (0..cl.count())
            .map(|c| {
                let y = self.g.conjugate(x, self.h_to_g[cl.rep(c) as usize]);
                cl.class_of[self.g_to_h[y as usize] as usize] as usize
            })
            .collect()
    }

    /// Irr(H)^K, as row indices of the table of H.
    pub fn fixed_characters(&self) -> Vec<usize> {
        let actions: Vec<Vec<usize>> = self.image.iter().map(|&l| self.class_action(self.lifts[&l])).collect();
        let t = &self.h_table;
        (0..t.char_count())
            .filter(|&theta| {
                actions.iter().all(|perm| {
                    perm.iter().enumerate().all(|(c, &d)| c == d || t.value(theta, c) == t.value(theta, d))
                })
            })
            .collect()
    }

    pub fn is_fixed(&self, theta: usize) -> bool {
        let t = &self.h_table;
        self.image.iter().all(|&l| {
            let perm = self.class_action(self.lifts[&l]);
            perm.iter().enumerate().all(|(c, &d)| c == d || t.value(theta, c) == t.value(theta, d))
        })
    }

    /// Multiplication table of H, row-major, when H is small enough.
    fn h_table_mul(&self) -> Option<&[u32]> {
        self.h_mul
            .get_or_init(|| {
                let n = self.h.order();
                (n <= H_TABLE_MAX).then(|| {
                    let mut t = Vec::with_capacity(n * n);
                    for i in 0..n as u32 {
                        for j in 0..n as u32 {
                            t.push(self.h.mul(i, j));
                        }
                    }
                    t
                })
            })
            .as_deref()
    }

    /// Number of pairs (u, v) ∈ xH × yH with [u, v] = h, for every h ∈ H
    /// (indexed by H).
    pub fn commutator_histogram(&self, x: u32, y: u32) -> Result<Vec<u64>, OracleError> {
        let n = self.h.order() as u64;
        if n * n > self.caps.max_pair_iterations {
            return Err(OracleError::CapExceeded { what: "pair iterations", limit: self.caps.max_pair_iterations });
        }
        let Some(mul) = self.h_table_mul() else {
            return self.commutator_histogram_matrices(x, y);
        };
        // [h1 x, h2 y] = h1 · x h2 x^{-1} · w h1^{-1} w^{-1} · [x, y] h2^{-1} with w = x y x^{-1}
        let g = &self.g;
        let h_of = |e: u32| self.h_index(e).ok_or(OracleError::NotClosed);
        let w = g.conjugate(x, y);
        let k = g.commutator(x, y);
        let n = n as usize;
        let mut conj_x = Vec::with_capacity(n);
        let mut conj_w = Vec::with_capacity(n);
        let mut tail = Vec::with_capacity(n);
        for h in 0..n as u32 {
            let e = self.g_index(h);
            let e_inv = g.inverse(e);
            conj_x.push(h_of(g.conjugate(x, e))?);
            conj_w.push(h_of(g.conjugate(w, e_inv))?);
            tail.push(h_of(g.mul(k, e_inv))?);
        }
        let mut hist = vec![0u64; n];
        for h1 in 0..n {
            let row = &mul[h1 * n..(h1 + 1) * n];
            let c1 = conj_w[h1] as usize;
            for h2 in 0..n {
                let t1 = row[conj_x[h2] as usize] as usize;
                let t2 = mul[t1 * n + c1] as usize;
                hist[mul[t2 * n + tail[h2] as usize] as usize] += 1;
            }
        }
        Ok(hist)
    }

    fn commutator_histogram_matrices(&self, x: u32, y: u32) -> Result<Vec<u64>, OracleError> {
        let n = self.h.order() as u64;
        let f = self.g.field();
        let dim = self.g.dim();
        let coset = |x: u32| -> (Vec<Matrix>, Vec<Matrix>) {
            let xm = self.g.element(x);
            let xi = self.g.element(self.g.inverse(x));
            let fwd = self.h.elements().iter().map(|h| matrix::mul(f, dim, h, xm)).collect();
            let inv = self.h.elements().iter().map(|h| matrix::mul(f, dim, xi, &matrix::inverse(f, dim, h).unwrap())).collect();
            (fwd, inv)
        };
        let (xs, xs_inv) = coset(x);
        let (ys, ys_inv) = coset(y);
        let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(xs.len().max(1));
        let chunk = xs.len().div_ceil(workers);
        let parts: Vec<Result<Vec<u64>, OracleError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (xs, xs_inv, ys, ys_inv) = (&xs, &xs_inv, &ys, &ys_inv);
                    scope.spawn(move || {
                        let mut hist = vec![0u64; n as usize];
                        let mut xy = vec![0u32; dim * dim];
                        let mut t = vec![0u32; dim * dim];
                        let mut c = vec![0u32; dim * dim];
                        for i in w * chunk..((w + 1) * chunk).min(xs.len()) {
                            for j in 0..ys.len() {
                                matrix::mul_into(f, dim, &xs[i], &ys[j], &mut xy);
                                matrix::mul_into(f, dim, &xy, &xs_inv[i], &mut t);
                                matrix::mul_into(f, dim, &t, &ys_inv[j], &mut c);
                                let k = self.h.index_of(&c).ok_or(OracleError::NotClosed)?;
                                hist[k as usize] += 1;
                            }
                        }
                        Ok(hist)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        let mut hist = vec![0u64; n as usize];
        for part in parts {
            for (a, b) in hist.iter_mut().zip(part?) {
                *a += b;
            }
        }
        Ok(hist)
    }

    /// Class-indexed weights of an element histogram over H.
    fn class_weights(&self, hist: &[u64]) -> Vec<i64> {
        let cl = self.h_table.classes();
        let mut w = vec![0i64; cl.count()];
        for (h, &k) in hist.iter().enumerate() {
            w[cl.class_of[h] as usize] += k as i64;
        }
        w
    }

    /// Ω_θ from a commutator histogram: θ(1)/|H|²·Σ_h hist(h)·θ(h).
    pub fn omega_from_histogram(&self, theta: usize, hist: &[u64]) -> Result<CyclotomicInteger, OracleError> {
        let n = self.h.order() as i64;
        let sum = self.h_table.weighted_sum(theta, &self.class_weights(hist));
        sum.scale(self.h_table.degree(theta) as i64).div_exact(n * n).ok_or(OracleError::NonExactQuotient)
    }

    /// Ω_θ(a, b) computed with explicit lifts x_a, y_b.
    pub fn omega_with_lifts(&self, theta: usize, x: u32, y: u32) -> Result<CyclotomicInteger, OracleError> {
        if !self.is_fixed(theta) {
            return Err(OracleError::NotInvariant);
        }
        self.omega_from_histogram(theta, &self.commutator_histogram(x, y)?)
    }
}

/// Ω_θ(a, b) = θ(1)/|H|²·Σ_{x,y∈H} θ([x·x_a, y·y_b]).
pub fn omega_def(s: &CliffordSetting, theta: usize, a: Label, b: Label) -> Result<CyclotomicInteger, OracleError> {
    s.omega_with_lifts(theta, s.lift_or_err(a)?, s.lift_or_err(b)?)
}

fn check_tuples(genus: u32, a: &[Label], b: &[Label]) -> Result<(), OracleError> {
    if a.len() != genus as usize || b.len() != genus as usize || genus == 0 {
        return Err(OracleError::InvalidParameters("a and b need one label per handle".into()));
    }
    Ok(())
}

/// |{(x, y) ∈ G^g × G^g : ∏[x_i, y_i]·z = 1, π(x) = a, π(y) = b}| by enumeration.
pub fn brute_count(s: &CliffordSetting, genus: u32, z: u32, a: &[Label], b: &[Label]) -> Result<BigInt, OracleError> {
    check_tuples(genus, a, b)?;
    let hz = s.h_index(z).ok_or_else(|| OracleError::InvalidParameters("z is not in H".into()))?;
    let h = &s.h;
    let mut dist: Option<Vec<u128>> = None;
    for (&ai, &bi) in a.iter().zip(b) {
        let hist = s.commutator_histogram(s.lift_or_err(ai)?, s.lift_or_err(bi)?)?;
        dist = Some(match dist {
            None => hist.iter().map(|&k| k as u128).collect(),
            Some(prev) => {
                let mut next = vec![0u128; h.order()];
                for (u, &pu) in prev.iter().enumerate() {
                    if pu == 0 {
                        continue;
                    }
                    for (v, &pv) in hist.iter().enumerate() {
                        if pv != 0 {
                            next[h.mul(u as u32, v as u32) as usize] += pu * pv as u128;
                        }
                    }
                }
                next
            }
        });
    }
    let dist = dist.expect("genus is positive");
    Ok(BigInt::from(dist[h.inverse(hz) as usize]))
}

/// Σ_{θ ∈ Irr(H)^K} (|H|/θ(1))^{2g-1}·Ω_θ(a, b)·θ(z), with Ω over tuples the
/// product over coordinates.
pub fn formula_count(s: &CliffordSetting, genus: u32, z: u32, a: &[Label], b: &[Label]) -> Result<BigInt, OracleError> {
    check_tuples(genus, a, b)?;
    let all: Vec<Label> = a.iter().chain(b).copied().collect();
    if !s.generates(&all) {
        return Err(OracleError::NotGenerating);
    }
    let hz = s.h_index(z).ok_or_else(|| OracleError::InvalidParameters("z is not in H".into()))?;
    let hists: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(&ai, &bi)| s.commutator_histogram(s.lift_or_err(ai)?, s.lift_or_err(bi)?))
        .collect::<Result<_, _>>()?;
    let t = &s.h_table;
    let e = t.exponent();
    let mut acc = vec![BigInt::zero(); CyclotomicInteger::zero(e).coeffs().len()];
    for theta in s.fixed_characters() {
        let mut term = t.value_at(theta, hz);
        for hist in &hists {
            term = term.mul(&s.omega_from_histogram(theta, hist)?)?;
        }
        let weight = BigInt::from(s.h.order() as u64 / t.degree(theta)).pow(2 * genus - 1);
        for (x, &c) in acc.iter_mut().zip(term.coeffs()) {
            *x += &weight * c;
        }
    }
    if acc.iter().skip(1).any(|x| !x.is_zero()) {
        return Err(OracleError::Inconsistent("character formula is not an integer".into()));
    }
    Ok(acc.swap_remove(0))
}

/// Clifford data of one irreducible character of G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterClifford {
    pub chi: usize,
    pub degree: u64,
    /// e(χ): the common multiplicity of the constituents of χ restricted to H.
    pub ramification: u64,
    /// [χ]: the orbit of χ under multiplication by Irr(K).
    pub orbit: Vec<usize>,
    /// [θ]: the constituents of the restriction to H.
    pub constituents: Vec<usize>,
}

impl CharacterClifford {
    /// e(χ)²·|[χ]|·|[θ]| = |K|.
    pub fn satisfies_clifford(&self, k_size: usize) -> bool {
        (self.ramification * self.ramification) as usize * self.orbit.len() * self.constituents.len() == k_size
    }
}

#[derive(Clone, Debug)]
pub struct CliffordReport {
    pub k_size: usize,
    pub characters: Vec<CharacterClifford>,
    /// e for each irreducible of H (0 if it lies under no χ, which cannot happen).
    pub theta_ramification: Vec<u64>,
}

impl CliffordReport {
    pub fn all_valid(&self) -> bool {
        self.characters.iter().all(|c| c.satisfies_clifford(self.k_size))
    }
}

/// Restrictions of every irreducible of G to H, via inner products mod a
/// prime above 2|G|.
pub fn clifford_data(s: &CliffordSetting) -> Result<CliffordReport, OracleError> {
    let gt = character_table(&s.g)?;
    let ht = &s.h_table;
    let [ma, mb] = s.moduli;
    let order = lcm(lcm(gt.exponent() as u64, ma as u64), mb as u64) as u32;
    let red = Reduction::new(order, 2 * s.g.order() as u64);
    let ell = red.ell;
    let g_res = gt.residues(&red);
    let h_res = ht.residues(&red);
    let hcl = ht.classes();
    let gcl = gt.classes();
    let h_in_g: Vec<usize> =
        (0..hcl.count()).map(|c| gcl.class_of[s.h_to_g[hcl.rep(c) as usize] as usize] as usize).collect();
    let h_inv = red.int(s.h.order() as i64);
    let h_inv = crate::exactalg::numtheory::inv_mod(h_inv, ell);

    // λ ∈ Irr(Z/A × Z/B) evaluated on each G class
    let class_labels: Vec<Label> = (0..gcl.count()).map(|c| s.labels[gcl.rep(c) as usize]).collect();
    let lambdas: Vec<Vec<u64>> = (0..ma)
        .flat_map(|i| (0..mb).map(move |j| (i, j)))
        .map(|(i, j)| {
            class_labels
                .iter()
                .map(|l| {
                    let k = (i * l[0]) as u64 * (order / ma) as u64 + (j * l[1]) as u64 * (order / mb) as u64;
                    red.zeta_pow(k as i64)
                })
                .collect()
        })
        .collect();
    let row_index: FxHashMap<&[u64], usize> = g_res.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();

    let mut theta_ram = vec![0u64; ht.char_count()];
    let mut characters = Vec::with_capacity(gt.char_count());
    for chi in 0..gt.char_count() {
        let mut mults = Vec::new();
        for theta in 0..ht.char_count() {
            let sum = (0..hcl.count()).fold(0u64, |acc, c| {
                let t = g_res[chi][h_in_g[c]] * h_res[theta][hcl.inverse[c]] % ell;
                (acc + hcl.size(c) as u64 % ell * t) % ell
            });
            let m = sum * h_inv % ell;
            if m > gt.degree(chi) {
                return Err(OracleError::Inconsistent("restriction multiplicity out of range".into()));
            }
            if m > 0 {
                mults.push((theta, m));
            }
        }
        let e = mults[0].1;
        if mults.iter().any(|&(_, m)| m != e) {
            return Err(OracleError::Inconsistent("constituents with unequal multiplicities".into()));
        }
        for &(theta, _) in &mults {
            theta_ram[theta] = e;
        }
        let mut orbit: Vec<usize> = lambdas
            .iter()
            .map(|lam| {
                let prod: Vec<u64> = g_res[chi].iter().zip(lam).map(|(x, y)| x * y % ell).collect();
                row_index.get(prod.as_slice()).copied().ok_or_else(|| {
                    OracleError::Inconsistent("product with a character of K is not irreducible".into())
                })
            })
            .collect::<Result<_, _>>()?;
        orbit.sort_unstable();
        orbit.dedup();
        characters.push(CharacterClifford {
            chi,
            degree: gt.degree(chi),
            ramification: e,
            orbit,
            constituents: mults.iter().map(|&(t, _)| t).collect(),
        });
    }
    Ok(CliffordReport { k_size: s.k_size(), characters, theta_ramification: theta_ram })
}

/// Outcome of the Ω property suite for one K-fixed θ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaReport {
    pub theta: usize,
    pub kernel_size: usize,
    pub roots_of_unity: bool,
    pub bilinear: bool,
    pub antisymmetric: bool,
    pub unit_diagonal: bool,
    pub lift_independent: bool,
}

impl OmegaReport {
    pub fn all_hold(&self) -> bool {
        self.roots_of_unity && self.bilinear && self.antisymmetric && self.unit_diagonal && self.lift_independent
    }
}

/// Commutator histograms for every (a, b) ∈ K × K with the standard lifts.
pub struct OmegaTables {
    hists: Vec<Vec<Vec<u64>>>,
    alternate: Vec<Vec<Vec<u64>>>,
}

impl OmegaTables {
    /// Also records histograms for the lifts x_a·h, y_b·h with h the last
    /// element of H, for the lift-independence check.
    pub fn new(s: &CliffordSetting) -> Result<Self, OracleError> {
        let h_last = s.h_to_g[s.h.order() - 1];
        let k = s.image.len();
        let mut hists = vec![Vec::with_capacity(k); k];
        let mut alternate = vec![Vec::with_capacity(k); k];
        for (i, &a) in s.image.iter().enumerate() {
            let x = s.lifts[&a];
            let x_alt = s.g.mul(x, h_last);
            for &b in &s.image {
                let y = s.lifts[&b];
                hists[i].push(s.commutator_histogram(x, y)?);
                alternate[i].push(s.commutator_histogram(x_alt, s.g.mul(y, h_last))?);
            }
        }
        Ok(Self { hists, alternate })
    }

    /// Ω_θ(a, b) as a matrix indexed by positions in `s.image()`.
    pub fn matrix(&self, s: &CliffordSetting, theta: usize) -> Result<Vec<Vec<CyclotomicInteger>>, OracleError> {
        self.hists.iter().map(|row| row.iter().map(|h| s.omega_from_histogram(theta, h)).collect()).collect()
    }
}

/// Bilinearity, antisymmetry, Ω(x, x) = 1, lift independence, and the kernel
/// size of Ω_θ.
pub fn omega_properties(s: &CliffordSetting, tables: &OmegaTables, theta: usize) -> Result<OmegaReport, OracleError> {
    if !s.is_fixed(theta) {
        return Err(OracleError::NotInvariant);
    }
    let om = tables.matrix(s, theta)?;
    let k = s.image.len();
    let pos: FxHashMap<Label, usize> = s.image.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let add = |i: usize, j: usize| pos[&label_add(s.moduli, s.image[i], s.image[j])];
    let one = CyclotomicInteger::one(s.h_table.exponent());
    let roots_of_unity = om.iter().flatten().all(|v| v.root_of_unity_exponent().is_some());
    let mut bilinear = true;
    let mut antisymmetric = true;
    let mut unit_diagonal = true;
    let mut lift_independent = true;
    for i in 0..k {
        unit_diagonal &= om[i][i] == one;
        for j in 0..k {
            antisymmetric &= om[i][j].mul(&om[j][i])? == one;
            lift_independent &= s.omega_from_histogram(theta, &tables.alternate[i][j])? == om[i][j];
            for l in 0..k {
                bilinear &= om[i][add(j, l)] == om[i][j].mul(&om[i][l])?;
            }
        }
    }
    let kernel_size = (0..k).filter(|&i| om[i].iter().all(|v| v == &one)).count();
    Ok(OmegaReport { theta, kernel_size, roots_of_unity, bilinear, antisymmetric, unit_diagonal, lift_independent })
}

/// For an abelian H and an unramified K-fixed θ: ξ ↦ Ω_{ξθ}(a, b) is
/// multiplicative on the K-fixed linear characters ξ. Returns the number of
/// (ξ₁, ξ₂, a, b) instances checked, or an error naming the first failure.
pub fn check_magic_formula(s: &CliffordSetting, tables: &OmegaTables) -> Result<usize, OracleError> {
    let t = &s.h_table;
    let cl = t.classes();
    if t.exponent_value(0, 0).is_none() {
        return Err(OracleError::InvalidParameters("magic formula check needs an abelian H".into()));
    }
    let e = t.exponent();
    let rows: Vec<Vec<u32>> =
        (0..t.char_count()).map(|x| (0..cl.count()).map(|c| t.exponent_value(x, c).unwrap()).collect()).collect();
    let index: FxHashMap<&[u32], usize> = rows.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
    let product = |x: usize, y: usize| -> usize {
        let r: Vec<u32> = rows[x].iter().zip(&rows[y]).map(|(a, b)| (a + b) % e).collect();
        index[r.as_slice()]
    };
    let fixed = s.fixed_characters();
    let mut omegas = FxHashMap::default();
    for &x in &fixed {
        omegas.insert(x, tables.matrix(s, x)?);
    }
    let one = CyclotomicInteger::one(e);
    let unramified: Vec<usize> =
        fixed.iter().copied().filter(|x| omegas[x].iter().flatten().all(|v| v == &one)).collect();
    let mut checked = 0;
    for &theta in &unramified {
        for &x1 in &fixed {
            for &x2 in &fixed {
                let (t1, t2, t12) = (product(x1, theta), product(x2, theta), product(product(x1, x2), theta));
                let (o1, o2, o12) = (&omegas[&t1], &omegas[&t2], &omegas[&t12]);
                for i in 0..o1.len() {
                    for j in 0..o1.len() {
                        if o12[i][j] != o1[i][j].mul(&o2[i][j])? {
                            return Err(OracleError::Inconsistent(format!(
                                "magic formula fails for theta {theta}, xi {x1}, {x2}"
                            )));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked)
}

/// Ω values as root-of-unity exponents, for reports.
pub fn omega_exponent(v: &CyclotomicInteger) -> Option<i64> {
    v.root_of_unity_exponent().map(i64::from)
}
