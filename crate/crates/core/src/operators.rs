//! Gropes produced by satellite and string link infection, and the
//! explicit families built from them.
//!
//! An infection by a pattern `R` with winding counts `w[s][j]` takes
//! `w[s][j]` parallel copies of the grope for input `j` into output `s`,
//! and caps every tip of every copied branch with a boundary connected
//! sum of copies of the η-gropes. Lengths grow by the η height `h`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::grope::{
    validate, BoundaryKind, Branch, BranchGrope, BranchRun, GropeError, MultiGrope, SymmetricTree,
};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("operator needs at least one output and one slot")]
    Empty,
    #[error("{what} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    Shape {
        what: &'static str,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("eta gropes have different heights ({0} and {1})")]
    EtaHeights(u32, u32),
    #[error("|aw[{s}][{j}]| = {aw} exceeds the geometric count {w}")]
    WindingBound { s: usize, j: usize, aw: i64, w: u64 },
    #[error("operator has {slots} slots but {inputs} input gropes were given")]
    SlotMismatch { slots: usize, inputs: usize },
    #[error("input {input}: {source}")]
    Input { input: usize, source: GropeError },
    #[error("input {input}: tip {tip} has total cap multiplicity 0 but h = {h}")]
    UncappedTip { input: usize, tip: u128, h: u32 },
    #[error("input {input}: cap assignment covers {given} tips, grope has {tips}")]
    CapsMissing {
        input: usize,
        given: u128,
        tips: u128,
    },
    #[error("cap multiplicities need one entry per slot ({slots}), got {got}")]
    CapWidth { slots: usize, got: usize },
    #[error("parallel copy count must be positive")]
    ZeroParallel,
    #[error("operator has nonzero algebraic winding; contraction is not certified")]
    NonzeroAlgebraicWinding,
    #[error("not certified contractive at q = {q}: need q > N = {n}")]
    NotContractive { q: String, n: u64 },
    #[error("family parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Grope(#[from] GropeError),
}

/// Combinatorial data of a string link infection `R(−, η)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfectionOperator {
    winding: Vec<Vec<u64>>,
    algebraic: Vec<Vec<i64>>,
    eta: Vec<Option<SymmetricTree>>,
    slice_with_disks: bool,
}

impl InfectionOperator {
    /// `winding` and `algebraic` are `outputs × slots`; `eta` has one entry
    /// per slot, `None` meaning height 0.
    pub fn new(
        winding: Vec<Vec<u64>>,
        algebraic: Vec<Vec<i64>>,
        eta: Vec<Option<SymmetricTree>>,
        slice_with_disks: bool,
    ) -> Result<Self, OperatorError> {
        let outputs = winding.len();
        let slots = eta.len();
        if outputs == 0 || slots == 0 {
            return Err(OperatorError::Empty);
        }
        let shape = |what, m: &[usize]| -> Result<(), OperatorError> {
            if m.len() != outputs || m.iter().any(|&c| c != slots) {
                let cols = m.iter().copied().find(|&c| c != slots).unwrap_or(slots);
                return Err(OperatorError::Shape {
                    what,
                    rows: m.len(),
                    cols,
                    want_rows: outputs,
                    want_cols: slots,
                });
            }
            Ok(())
        };
        shape(
            "winding matrix",
            &winding.iter().map(|r| r.len()).collect::<Vec<_>>(),
        )?;
        shape(
            "algebraic winding matrix",
            &algebraic.iter().map(|r| r.len()).collect::<Vec<_>>(),
        )?;
        let height = |t: &Option<SymmetricTree>| t.as_ref().map_or(0, |t| t.height());
        if let Some(w) = eta.windows(2).find(|w| height(&w[0]) != height(&w[1])) {
            return Err(OperatorError::EtaHeights(height(&w[0]), height(&w[1])));
        }
        for (j, tree) in eta.iter().enumerate() {
            if let Some(tree) = tree {
                let probe = MultiGrope::single(BranchGrope::new(
                    BoundaryKind::KnotSlice,
                    [Branch::pair(tree.clone(), tree.clone())],
                ));
                validate(&probe)
                    .into_result()
                    .map_err(|source| OperatorError::Input { input: j, source })?;
            }
        }
        for (s, (wr, ar)) in winding.iter().zip(&algebraic).enumerate() {
            for (j, (&w, &aw)) in wr.iter().zip(ar).enumerate() {
                if aw.unsigned_abs() > w {
                    return Err(OperatorError::WindingBound { s, j, aw, w });
                }
            }
        }
        Ok(InfectionOperator {
            winding,
            algebraic,
            eta,
            slice_with_disks,
        })
    }

    pub fn outputs(&self) -> usize {
        self.winding.len()
    }

    pub fn slots(&self) -> usize {
        self.eta.len()
    }

    pub fn winding(&self) -> &[Vec<u64>] {
        &self.winding
    }

    pub fn algebraic_winding(&self) -> &[Vec<i64>] {
        &self.algebraic
    }

    pub fn eta(&self) -> &[Option<SymmetricTree>] {
        &self.eta
    }

    pub fn slice_with_disks(&self) -> bool {
        self.slice_with_disks
    }

    /// Common height of the η-gropes.
    pub fn height(&self) -> u32 {
        self.eta[0].as_ref().map_or(0, |t| t.height())
    }

    /// `N = max_j Σ_s w[s][j]`.
    pub fn max_slot_winding(&self) -> u64 {
        (0..self.slots())
            .map(|j| self.winding.iter().map(|r| r[j]).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_algebraic_winding_zero(&self) -> bool {
        self.algebraic.iter().flatten().all(|&a| a == 0)
    }
}

/// Cap multiplicities `c(tip, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CapAssignment {
    /// Every tip of every input uses the same multiplicity per slot.
    Uniform(Vec<u64>),
    /// `per_tip[input][tip][slot]`; tips are numbered branch by branch,
    /// left side before right, depth first, two per handle of each top
    /// surface, and one for each absent side.
    PerTip(Vec<Vec<Vec<u64>>>),
}

impl CapAssignment {
    /// Multiplicity one for every tip and slot.
    pub fn ones(slots: usize) -> Self {
        CapAssignment::Uniform(vec![1; slots])
    }
}

// The surface attached at one tip: a boundary connected sum of copies of
// the η-gropes, so genera add and child lists concatenate.
fn cap_tree(eta: &[Option<SymmetricTree>], mults: &[u64]) -> Option<SymmetricTree> {
    let mut genus = 0u64;
    let mut children = Vec::new();
    for (tree, &c) in eta.iter().zip(mults) {
        if let Some(tree) = tree {
            genus += c * tree.genus();
            for _ in 0..c {
                children.extend_from_slice(tree.children());
            }
        }
    }
    (genus > 0).then(|| SymmetricTree::new(genus, children))
}

struct Uniform<'a> {
    cap: &'a SymmetricTree,
    memo: HashMap<usize, SymmetricTree>,
}

impl Uniform<'_> {
    fn attach(&mut self, tree: &SymmetricTree) -> SymmetricTree {
        if let Some(done) = self.memo.get(&tree.node_id()) {
            return done.clone();
        }
        let children = if tree.is_leaf() {
            vec![self.cap.clone(); 2 * tree.genus() as usize]
        } else {
            tree.children().iter().map(|c| self.attach(c)).collect()
        };
        let out = SymmetricTree::new(tree.genus(), children);
        self.memo.insert(tree.node_id(), out.clone());
        out
    }

    fn side(&mut self, side: Option<&SymmetricTree>) -> SymmetricTree {
        match side {
            Some(t) => self.attach(t),
            None => self.cap.clone(),
        }
    }
}

struct PerTip<'a> {
    eta: &'a [Option<SymmetricTree>],
    caps: &'a [Vec<u64>],
    next: usize,
    input: usize,
    h: u32,
}

impl PerTip<'_> {
    fn cap(&mut self) -> Result<SymmetricTree, OperatorError> {
        let index = self.next;
        let mults = &self.caps[index];
        if mults.len() != self.eta.len() {
            return Err(OperatorError::CapWidth {
                slots: self.eta.len(),
                got: mults.len(),
            });
        }
        self.next += 1;
        cap_tree(self.eta, mults).ok_or(OperatorError::UncappedTip {
            input: self.input,
            tip: index as u128,
            h: self.h,
        })
    }

    fn attach(&mut self, tree: &SymmetricTree) -> Result<SymmetricTree, OperatorError> {
        let children = if tree.is_leaf() {
            (0..2 * tree.genus())
                .map(|_| self.cap())
                .collect::<Result<_, _>>()?
        } else {
            tree.children()
                .iter()
                .map(|c| self.attach(c))
                .collect::<Result<_, _>>()?
        };
        Ok(SymmetricTree::new(tree.genus(), children))
    }

    fn side(&mut self, side: Option<&SymmetricTree>) -> Result<SymmetricTree, OperatorError> {
        match side {
            Some(t) => self.attach(t),
            None => self.cap(),
        }
    }
}

// Input `j` with every tip capped, as a run list.
fn capped_runs(
    input: usize,
    grope: &BranchGrope,
    op: &InfectionOperator,
    caps: &CapAssignment,
) -> Result<Vec<BranchRun>, OperatorError> {
    let h = op.height();
    if h == 0 {
        return Ok(grope.runs().to_vec());
    }
    match caps {
        CapAssignment::Uniform(mults) => {
            if mults.len() != op.slots() {
                return Err(OperatorError::CapWidth {
                    slots: op.slots(),
                    got: mults.len(),
                });
            }
            let Some(cap) = cap_tree(&op.eta, mults) else {
                if grope.tip_count() == 0 {
                    return Ok(Vec::new());
                }
                return Err(OperatorError::UncappedTip { input, tip: 0, h });
            };
            let mut state = Uniform {
                cap: &cap,
                memo: HashMap::new(),
            };
            Ok(grope
                .runs()
                .iter()
                .map(|run| BranchRun {
                    branch: Branch::new(
                        Some(state.side(run.branch.left())),
                        Some(state.side(run.branch.right())),
                    ),
                    copies: run.copies,
                })
                .collect())
        }
        CapAssignment::PerTip(all) => {
            let tips = grope.tip_count();
            let given = all.get(input).map_or(0, |c| c.len() as u128);
            if given != tips {
                return Err(OperatorError::CapsMissing { input, given, tips });
            }
            let mut state = PerTip {
                eta: &op.eta,
                caps: &all[input],
                next: 0,
                input,
                h,
            };
            let mut runs = Vec::new();
            for branch in grope.branches() {
                let left = state.side(branch.left())?;
                let right = state.side(branch.right())?;
                runs.push(BranchRun {
                    branch: Branch::pair(left, right),
                    copies: 1,
                });
            }
            Ok(runs)
        }
    }
}

/// The grope for `R(L)` built from gropes for the inputs `L_j`.
///
/// Output component `s` consists of `w[s][j]` copies of every capped
/// branch of input `j`, in slot order. The output bounds in the 4-ball
/// (knot kind) when the pattern is slice with disks and every input is a
/// slice witness; otherwise it is a grope concordance.
pub fn infect(
    inputs: &[BranchGrope],
    op: &InfectionOperator,
    caps: &CapAssignment,
) -> Result<MultiGrope, OperatorError> {
    if inputs.len() != op.slots() {
        return Err(OperatorError::SlotMismatch {
            slots: op.slots(),
            inputs: inputs.len(),
        });
    }
    for (input, g) in inputs.iter().enumerate() {
        MultiGrope::single(g.clone())
            .validate()
            .into_result()
            .map_err(|source| OperatorError::Input { input, source })?;
    }
    if let CapAssignment::PerTip(all) = caps {
        if all.len() != inputs.len() {
            return Err(OperatorError::SlotMismatch {
                slots: inputs.len(),
                inputs: all.len(),
            });
        }
    }
    let capped: Vec<Vec<BranchRun>> = inputs
        .iter()
        .enumerate()
        .map(|(j, g)| capped_runs(j, g, op, caps))
        .collect::<Result<_, _>>()?;
    let kind = if op.slice_with_disks && inputs.iter().all(|g| g.kind() == BoundaryKind::KnotSlice)
    {
        BoundaryKind::KnotSlice
    } else {
        BoundaryKind::Concordance
    };
    let components = op
        .winding
        .iter()
        .map(|row| {
            let mut out = BranchGrope::empty(kind);
            for (j, &w) in row.iter().enumerate() {
                for _ in 0..w {
                    for run in &capped[j] {
                        out.push_run(run.clone());
                    }
                }
            }
            out
        })
        .collect();
    Ok(MultiGrope::new(components))
}

/// `gw` parallel copies of every branch: the grope for a pattern of
/// geometric winding `gw` when no η-grope is attached.
pub fn infect_parallel(input: &BranchGrope, gw: u64) -> Result<BranchGrope, OperatorError> {
    if gw == 0 {
        return Err(OperatorError::ZeroParallel);
    }
    MultiGrope::single(input.clone())
        .validate()
        .into_result()
        .map_err(|source| OperatorError::Input { input: 0, source })?;
    let runs = input.runs().to_vec();
    let repeated = (0..gw)
        .flat_map(|_| runs.iter().cloned())
        .collect::<Vec<_>>();
    Ok(BranchGrope::from_runs(input.kind(), repeated))
}

/// `δ = N/q`, the contraction constant of an algebraic winding zero
/// operator.
pub fn contraction_factor<T: Scalar>(op: &InfectionOperator, q: &T) -> Result<T, OperatorError> {
    if !op.is_algebraic_winding_zero() {
        return Err(OperatorError::NonzeroAlgebraicWinding);
    }
    let n = op.max_slot_winding();
    if n == 0 {
        return Ok(T::zero());
    }
    if *q <= T::from_count(n as u128) {
        return Err(OperatorError::NotContractive {
            q: format!("{q:?}"),
            n,
        });
    }
    Ok(T::from_count(n as u128) / q.clone())
}

/// Which family a witness belongs to; fixes its norm window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// `K_n^m`: window `[1/(2q)^{n+1}, 1/(2q^{n+1})]`.
    Kn { n: u32, m: u32 },
    /// `m` copies of an iterated Whitehead double: window `[0, m/(2q)^n]`.
    Whitehead { m: u64, n: u32 },
    /// Bing double link `J_i`: window `[1/(2q)^F, 1/(2q)^F]`, `F = F(i)`.
    Bing { components: usize, f: u32 },
}

/// A generated grope together with facts asserted about its boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyWitness {
    pub family: FamilyKind,
    pub grope: MultiGrope,
    pub asserted_flags: Vec<String>,
}

impl FamilyWitness {
    /// `(lower, upper)` bounds on the norm at `q`.
    pub fn window<T: Scalar>(&self, q: &T) -> (T, T) {
        let two_q = T::from_int(2) * q.clone();
        match self.family {
            FamilyKind::Kn { n, .. } => (
                T::one() / two_q.powu(n + 1),
                T::one() / (T::from_int(2) * q.powu(n + 1)),
            ),
            FamilyKind::Whitehead { m, n } => (T::zero(), T::from_count(m as u128) / two_q.powu(n)),
            FamilyKind::Bing { f, .. } => {
                let v = T::one() / two_q.powu(f);
                (v.clone(), v)
            }
        }
    }

    pub fn length<T: Scalar>(&self, q: &T) -> Result<T, OperatorError> {
        Ok(self.grope.length_q(q)?)
    }

    /// Checks `lower ≤ length ≤ upper` at each sample.
    pub fn check_window<T: Scalar>(&self, samples: &[T]) -> Result<bool, OperatorError> {
        for q in samples {
            let (lo, hi) = self.window(q);
            let len = self.length(q)?;
            if !(lo <= len && len <= hi) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The K₀ slice witness: one branch whose sides are genus one surfaces.
pub fn k0_witness() -> BranchGrope {
    BranchGrope::new(BoundaryKind::KnotSlice, [Branch::genus_one(1)])
}

/// The winding-two, algebraic-winding-zero doubling operator with a
/// genus one height one η-grope.
pub fn kn_operator() -> InfectionOperator {
    InfectionOperator::new(
        vec![vec![2]],
        vec![vec![0]],
        vec![Some(SymmetricTree::leaf(1))],
        true,
    )
    .expect("valid operator")
}

/// `K_n^m`, obtained from `K₀` by `n` infections: `2ⁿ` branches of
/// length `n + 1`, every surface genus one.
pub fn family_kn(n: u32, m: u32) -> Result<FamilyWitness, OperatorError> {
    if m < 3 {
        return Err(OperatorError::Parameter(format!(
            "K_n^m needs m >= 3, got {m}"
        )));
    }
    if n > 62 {
        return Err(OperatorError::Parameter(format!(
            "n = {n} overflows the branch count"
        )));
    }
    let op = kn_operator();
    let caps = CapAssignment::ones(1);
    let mut grope = k0_witness();
    for _ in 0..n {
        let out = infect(std::slice::from_ref(&grope), &op, &caps)?;
        grope = out.into_components().remove(0);
    }
    Ok(FamilyWitness {
        family: FamilyKind::Kn { n, m },
        grope: MultiGrope::single(grope),
        asserted_flags: vec![format!(
            "K_{n}^{m} is not in G_{} (asserted, m >= 3)",
            n + 3
        )],
    })
}

/// Connected sum of `m` copies of `Wh_+^n(J)`: `m` genus one branches of
/// length `n`.
pub fn family_whitehead(m: u64, n: u32) -> Result<FamilyWitness, OperatorError> {
    if m == 0 || n == 0 {
        return Err(OperatorError::Parameter(
            "Whitehead family needs m, n >= 1".into(),
        ));
    }
    let grope = BranchGrope::from_runs(
        BoundaryKind::KnotSlice,
        [BranchRun {
            branch: Branch::genus_one(n),
            copies: m,
        }],
    );
    Ok(FamilyWitness {
        family: FamilyKind::Whitehead { m, n },
        grope: MultiGrope::single(grope),
        asserted_flags: vec![format!(
            "tau = {m}, hence slice genus >= {m} (asserted, tau(Wh_+^n(J)) = 1)"
        )],
    })
}

/// Output of [`quasi_isometry_counterexample`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiIsometryWitness {
    pub m: u64,
    pub n: u32,
    pub witness: FamilyWitness,
    /// `m/A − B`.
    pub lhs: Rational,
    /// `m/2ⁿ`.
    pub rhs: Rational,
}

impl QuasiIsometryWitness {
    /// The strict inequality `m/A − B > m/2ⁿ`.
    pub fn certificate(&self) -> bool {
        self.lhs > self.rhs
    }
}

/// For constants `A ≥ 1`, `B ≥ 0`, a knot whose slice genus `m` and q=1
/// norm `m/2ⁿ` violate `g₄ ≤ A‖K‖ + B`.
pub fn quasi_isometry_counterexample(
    a: &Rational,
    b: &Rational,
) -> Result<QuasiIsometryWitness, OperatorError> {
    if *a < Rational::one() || *b < Rational::zero() {
        return Err(OperatorError::Parameter("need A >= 1 and B >= 0".into()));
    }
    let bound = a * (b + Rational::one());
    let m_big: BigInt = bound.floor().to_integer() + BigInt::one();
    let m = m_big
        .to_u64()
        .ok_or_else(|| OperatorError::Parameter("A(B+1) is too large".into()))?;
    // smallest n with 2^n > m
    let n = 64 - m.leading_zeros();
    let witness = family_whitehead(m, n)?;
    let m_q = Rational::from_integer(m_big);
    let lhs = &m_q / a - b;
    let rhs = m_q / Rational::from_integer(BigInt::one() << n);
    let out = QuasiIsometryWitness {
        m,
        n,
        witness,
        lhs,
        rhs,
    };
    debug_assert!(out.certificate());
    Ok(out)
}

/// The Bing double link `J_i` for a strictly increasing `F` given by its
/// values `F(1), F(2), …`: component one bounds a genus one grope of
/// length `F(i)`, the others bound disks.
pub fn family_bing_links(m: usize, f: &[u32], i: usize) -> Result<FamilyWitness, OperatorError> {
    if m < 2 {
        return Err(OperatorError::Parameter(format!(
            "links need at least 2 components, got {m}"
        )));
    }
    if f.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OperatorError::Parameter(
            "F must be strictly increasing".into(),
        ));
    }
    if i == 0 || i > f.len() {
        return Err(OperatorError::Parameter(format!(
            "index {i} outside 1..={}",
            f.len()
        )));
    }
    let fi = f[i - 1];
    if fi == 0 {
        return Err(OperatorError::Parameter("F(i) must be at least 1".into()));
    }
    let mut components = vec![BranchGrope::new(
        BoundaryKind::KnotSlice,
        [Branch::genus_one(fi)],
    )];
    components.extend((1..m).map(|_| BranchGrope::empty(BoundaryKind::KnotSlice)));
    Ok(FamilyWitness {
        family: FamilyKind::Bing {
            components: m,
            f: fi,
        },
        grope: MultiGrope::new(components),
        asserted_flags: vec![format!(
            "Milnor invariants: J_{i} bounds no height {} grope (asserted)",
            fi + 2
        )],
    })
}
