//! Combinatorial branch-symmetric gropes.
//!
//! A grope is stored as its tree of surface genera. Subtrees are
//! reference counted and may be shared, and a component's branch list is
//! run-length encoded, so the exponentially large witnesses produced by
//! iterated infection stay small in memory. All derived quantities (stage
//! genus sums, heights, tip counts) are computed from the tree.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::Scalar;

/// A symmetric grope: a surface of positive genus with one child grope per
/// symplectic basis curve, all tips at the same height.
///
/// Children come in dual pairs `(2i, 2i+1)`.
#[derive(Clone)]
pub struct SymmetricTree(Arc<TreeNode>);

struct TreeNode {
    genus: u64,
    children: Vec<SymmetricTree>,
    height: u32,
    well_formed: bool,
    // total genus of the surfaces at each depth below (and including) this one
    profile: Vec<u128>,
    fingerprint: u64,
}

impl SymmetricTree {
    /// Builds a node without checking any invariant; see [`validate`].
    pub fn new(genus: u64, children: Vec<SymmetricTree>) -> Self {
        let height = 1 + children.iter().map(|c| c.height()).max().unwrap_or(0);
        let uniform = children.windows(2).all(|w| w[0].height() == w[1].height());
        let count_ok = children.is_empty() || children.len() as u128 == 2 * genus as u128;
        let well_formed =
            genus >= 1 && count_ok && uniform && children.iter().all(|c| c.is_well_formed());

        let mut profile = vec![genus as u128];
        for child in &children {
            for (depth, g) in child.stage_genera().iter().enumerate() {
                if profile.len() <= depth + 1 {
                    profile.push(0);
                }
                profile[depth + 1] = profile[depth + 1].saturating_add(*g);
            }
        }

        let mut hasher = DefaultHasher::new();
        genus.hash(&mut hasher);
        for child in &children {
            child.0.fingerprint.hash(&mut hasher);
        }

        SymmetricTree(Arc::new(TreeNode {
            genus,
            children,
            height,
            well_formed,
            profile,
            fingerprint: hasher.finish(),
        }))
    }

    pub fn leaf(genus: u64) -> Self {
        Self::new(genus, Vec::new())
    }

    /// The height-`height` symmetric grope all of whose surfaces have genus one.
    pub fn genus_one(height: u32) -> Self {
        assert!(height >= 1, "symmetric gropes have height at least one");
        let mut tree = Self::leaf(1);
        for _ in 1..height {
            tree = Self::new(1, vec![tree.clone(), tree]);
        }
        tree
    }

    pub fn genus(&self) -> u64 {
        self.0.genus
    }

    pub fn children(&self) -> &[SymmetricTree] {
        &self.0.children
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_empty()
    }

    /// Number of stages; a bare surface has height one.
    pub fn height(&self) -> u32 {
        self.0.height
    }

    /// Caches the result of the structural checks done by [`validate`].
    pub fn is_well_formed(&self) -> bool {
        self.0.well_formed
    }

    /// Total genus per depth, depth 0 being this surface.
    pub fn stage_genera(&self) -> &[u128] {
        &self.0.profile
    }

    /// Number of basis curves on top stage surfaces.
    pub fn tip_count(&self) -> u128 {
        if self.is_well_formed() {
            return 2 * self.0.profile[self.0.profile.len() - 1];
        }
        if self.is_leaf() {
            2 * self.genus() as u128
        } else {
            self.children().iter().map(|c| c.tip_count()).sum()
        }
    }

    pub(crate) fn same_node(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn structurally_equal(&self, other: &Self, seen: &mut HashSet<(usize, usize)>) -> bool {
        if self.same_node(other) {
            return true;
        }
        if self.0.fingerprint != other.0.fingerprint
            || self.genus() != other.genus()
            || self.children().len() != other.children().len()
        {
            return false;
        }
        if !seen.insert((self.node_id(), other.node_id())) {
            return true;
        }
        self.children()
            .iter()
            .zip(other.children())
            .all(|(a, b)| a.structurally_equal(b, seen))
    }
}

impl PartialEq for SymmetricTree {
    fn eq(&self, other: &Self) -> bool {
        self.structurally_equal(other, &mut HashSet::new())
    }
}

impl Eq for SymmetricTree {}

impl fmt::Debug for SymmetricTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text: `(genus child child ...)`, consecutive equal children
/// written once with a `*count` suffix.
impl fmt::Display for SymmetricTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.genus())?;
        let children = self.children();
        let mut i = 0;
        while i < children.len() {
            let mut run = 1;
            while i + run < children.len() && children[i + run] == children[i] {
                run += 1;
            }
            write!(f, " {}", children[i])?;
            if run > 1 {
                write!(f, "*{run}")?;
            }
            i += run;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// The two symmetric gropes on one dual pair of first stage curves.
/// An absent side is the height-0 (empty) grope.
#[derive(Clone, PartialEq, Eq)]
pub struct Branch {
    left: Option<SymmetricTree>,
    right: Option<SymmetricTree>,
}

impl Branch {
    pub fn new(left: Option<SymmetricTree>, right: Option<SymmetricTree>) -> Self {
        Branch { left, right }
    }

    /// A length-0 branch: nothing attached to either curve.
    pub fn bare() -> Self {
        Branch::new(None, None)
    }

    pub fn pair(left: SymmetricTree, right: SymmetricTree) -> Self {
        Branch::new(Some(left), Some(right))
    }

    pub fn genus_one(length: u32) -> Self {
        if length == 0 {
            Branch::bare()
        } else {
            let side = SymmetricTree::genus_one(length);
            Branch::pair(side.clone(), side)
        }
    }

    pub fn left(&self) -> Option<&SymmetricTree> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&SymmetricTree> {
        self.right.as_ref()
    }

    pub fn side(&self, side: Side) -> Option<&SymmetricTree> {
        match side {
            Side::Left => self.left(),
            Side::Right => self.right(),
        }
    }

    fn side_height(tree: Option<&SymmetricTree>) -> u32 {
        tree.map_or(0, |t| t.height())
    }

    /// `n_i`, the common height of the two sides.
    pub fn length(&self) -> u32 {
        Self::side_height(self.left()).max(Self::side_height(self.right()))
    }

    pub fn is_paired(&self) -> bool {
        Self::side_height(self.left()) == Self::side_height(self.right())
    }

    /// `g_k` for `k = 2 ..= n + 1`: total genus of the stage-`k` surfaces
    /// over this branch.
    pub fn stage_sums(&self) -> Vec<u128> {
        let mut sums = vec![0u128; self.length() as usize];
        for tree in [self.left(), self.right()].into_iter().flatten() {
            for (depth, g) in tree.stage_genera().iter().enumerate() {
                sums[depth] += g;
            }
        }
        sums
    }

    /// Tips of this branch; a side of height 0 contributes its first stage
    /// curve as a single tip.
    pub fn tip_count(&self) -> u128 {
        [self.left(), self.right()]
            .into_iter()
            .map(|side| side.map_or(1, |t| t.tip_count()))
            .sum()
    }

    /// `q^{-n} (1 - Σ_k 1/g_k)`.
    pub fn term<T: Scalar>(&self, q: &T) -> T {
        let mut bracket = T::one();
        for g in self.stage_sums() {
            bracket = bracket - T::one() / T::from_count(g);
        }
        bracket / q.powu(self.length())
    }

    pub(crate) fn same_nodes(&self, other: &Self) -> bool {
        let eq = |a: Option<&SymmetricTree>, b: Option<&SymmetricTree>| match (a, b) {
            (None, None) => true,
            (Some(x), Some(y)) => x.same_node(y),
            _ => false,
        };
        eq(self.left(), other.left()) && eq(self.right(), other.right())
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |t: Option<&SymmetricTree>| t.map_or("-".to_string(), |t| t.to_string());
        write!(f, "Branch[{} {}]", side(self.left()), side(self.right()))
    }
}

/// `copies` consecutive identical branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRun {
    pub branch: Branch,
    pub copies: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// One boundary circle: a knot bounding the grope in the 4-ball.
    KnotSlice,
    /// Two boundary circles: a grope concordance in `S³ × I`.
    Concordance,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::KnotSlice => "knot",
            BoundaryKind::Concordance => "concordance",
        })
    }
}

/// First stage surface plus its branches. The first stage genus `g₁` is
/// the number of branches.
#[derive(Debug, Clone)]
pub struct BranchGrope {
    kind: BoundaryKind,
    runs: Vec<BranchRun>,
}

impl BranchGrope {
    pub fn new(kind: BoundaryKind, branches: impl IntoIterator<Item = Branch>) -> Self {
        Self::from_runs(
            kind,
            branches
                .into_iter()
                .map(|branch| BranchRun { branch, copies: 1 }),
        )
    }

    /// Adjacent runs over the same shared branch are merged; empty runs dropped.
    pub fn from_runs(kind: BoundaryKind, runs: impl IntoIterator<Item = BranchRun>) -> Self {
        let mut grope = BranchGrope {
            kind,
            runs: Vec::new(),
        };
        for run in runs {
            grope.push_run(run);
        }
        grope
    }

    pub fn empty(kind: BoundaryKind) -> Self {
        BranchGrope {
            kind,
            runs: Vec::new(),
        }
    }

    /// A bare genus-`g` surface.
    pub fn surface(kind: BoundaryKind, genus: u64) -> Self {
        Self::from_runs(
            kind,
            [BranchRun {
                branch: Branch::bare(),
                copies: genus,
            }],
        )
    }

    pub(crate) fn push_run(&mut self, run: BranchRun) {
        if run.copies == 0 {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.branch.same_nodes(&run.branch) {
                last.copies += run.copies;
                return;
            }
        }
        self.runs.push(run);
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: BoundaryKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn runs(&self) -> &[BranchRun] {
        &self.runs
    }

    /// `g₁`.
    pub fn first_stage_genus(&self) -> u64 {
        self.runs.iter().map(|r| r.copies).sum()
    }

    pub fn branch_count(&self) -> u64 {
        self.first_stage_genus()
    }

    pub fn branches(&self) -> impl Iterator<Item = &Branch> + '_ {
        self.runs
            .iter()
            .flat_map(|run| std::iter::repeat_n(&run.branch, run.copies as usize))
    }

    pub fn branch(&self, index: u64) -> Option<&Branch> {
        self.locate(index).map(|(run, _)| &self.runs[run].branch)
    }

    fn locate(&self, index: u64) -> Option<(usize, u64)> {
        let mut start = 0u64;
        for (i, run) in self.runs.iter().enumerate() {
            if index < start + run.copies {
                return Some((i, index - start));
            }
            start += run.copies;
        }
        None
    }

    /// Tips over all branches, in branch order.
    pub fn tip_count(&self) -> u128 {
        self.runs
            .iter()
            .map(|r| r.copies as u128 * r.branch.tip_count())
            .sum()
    }

    /// Runs with structurally equal neighbours merged; the canonical
    /// sequence used for equality and printing.
    pub fn canonical_runs(&self) -> Vec<BranchRun> {
        let mut out: Vec<BranchRun> = Vec::new();
        for run in &self.runs {
            match out.last_mut() {
                Some(last) if last.branch == run.branch => last.copies += run.copies,
                _ => out.push(run.clone()),
            }
        }
        out
    }

    pub fn length_q<T: Scalar>(&self, q: &T) -> Result<T, GropeError> {
        MultiGrope::single(self.clone()).length_q(q)
    }
}

impl PartialEq for BranchGrope {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.canonical_runs() == other.canonical_runs()
    }
}

impl Eq for BranchGrope {}

/// A disjoint union of branch-symmetric gropes, one per link component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGrope {
    components: Vec<BranchGrope>,
}

impl MultiGrope {
    pub fn new(components: Vec<BranchGrope>) -> Self {
        MultiGrope { components }
    }

    pub fn single(component: BranchGrope) -> Self {
        MultiGrope {
            components: vec![component],
        }
    }

    pub fn components(&self) -> &[BranchGrope] {
        &self.components
    }

    pub fn into_components(self) -> Vec<BranchGrope> {
        self.components
    }

    pub fn branch_count(&self) -> u64 {
        self.components.iter().map(|c| c.branch_count()).sum()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// `‖Σ‖^q`.
    pub fn length_q<T: Scalar>(&self, q: &T) -> Result<T, GropeError> {
        length_q(self, q)
    }
}

impl From<BranchGrope> for MultiGrope {
    fn from(component: BranchGrope) -> Self {
        MultiGrope::single(component)
    }
}

/// Where a violation sits: component, branch, side and child-index path
/// from the side's root surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub component: usize,
    pub branch: Option<u64>,
    pub side: Option<Side>,
    pub path: Vec<usize>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {}", self.component)?;
        if let Some(b) = self.branch {
            write!(f, ", branch {b}")?;
        }
        if let Some(s) = self.side {
            write!(f, ", {s}")?;
            for p in &self.path {
                write!(f, "/{p}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    NoComponents,
    DiskStage,
    ChildCount { genus: u64, children: usize },
    NonUniformHeight,
    UnpairedBranchHeights { left: u32, right: u32 },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::NoComponents => write!(f, "no components"),
            ViolationKind::DiskStage => write!(f, "disk stage"),
            ViolationKind::ChildCount { genus, children } => write!(
                f,
                "genus {genus} surface carries {children} children (expected 0 or {})",
                2 * genus
            ),
            ViolationKind::NonUniformHeight => write!(f, "non-uniform leaf depth"),
            ViolationKind::UnpairedBranchHeights { left, right } => {
                write!(f, "unpaired branch heights (left {left}, right {right})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.kind, self.location)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<(), GropeError> {
        match self.violations.first() {
            None => Ok(()),
            Some(first) => Err(GropeError::Invalid {
                first: first.to_string(),
                count: self.violations.len(),
            }),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GropeError {
    #[error("invalid grope: {first} ({count} violation(s))")]
    Invalid { first: String, count: usize },
    #[error("q must be at least 1")]
    QBelowOne,
    #[error("component count mismatch ({left} vs {right})")]
    ComponentMismatch { left: usize, right: usize },
    #[error("only grope concordances can be glued")]
    NotConcordance,
    #[error("grope has no branches")]
    NoBranches,
    #[error("branch index {index} out of range ({count} branches)")]
    BranchIndex { index: u64, count: u64 },
    #[error("{side} side of branch {index} has root genus {genus}; nothing to split")]
    NothingToSplit { index: u64, side: Side, genus: u64 },
    #[error("{side} side of branch {index} is empty; nothing to split")]
    EmptySide { index: u64, side: Side },
}

fn check_tree(tree: &SymmetricTree, location: &mut Location, out: &mut Vec<Violation>) {
    if tree.is_well_formed() {
        return;
    }
    let mut report = |kind: ViolationKind, loc: &Location| {
        out.push(Violation {
            kind,
            location: loc.clone(),
        });
    };
    if tree.genus() == 0 {
        report(ViolationKind::DiskStage, location);
    }
    let children = tree.children();
    if !children.is_empty() && children.len() as u128 != 2 * tree.genus() as u128 {
        report(
            ViolationKind::ChildCount {
                genus: tree.genus(),
                children: children.len(),
            },
            location,
        );
    }
    if children.windows(2).any(|w| w[0].height() != w[1].height()) {
        report(ViolationKind::NonUniformHeight, location);
    }
    for (i, child) in children.iter().enumerate() {
        if !child.is_well_formed() {
            location.path.push(i);
            check_tree(child, location, out);
            location.path.pop();
        }
    }
}

/// Checks every structural invariant and reports each violation with its
/// location. Never fails.
pub fn validate(grope: &MultiGrope) -> ValidationReport {
    let mut violations = Vec::new();
    if grope.components.is_empty() {
        violations.push(Violation {
            kind: ViolationKind::NoComponents,
            location: Location {
                component: 0,
                branch: None,
                side: None,
                path: Vec::new(),
            },
        });
    }
    for (c, component) in grope.components.iter().enumerate() {
        let mut start = 0u64;
        for run in &component.runs {
            let branch = &run.branch;
            let mut location = Location {
                component: c,
                branch: Some(start),
                side: None,
                path: Vec::new(),
            };
            if !branch.is_paired() {
                violations.push(Violation {
                    kind: ViolationKind::UnpairedBranchHeights {
                        left: Branch::side_height(branch.left()),
                        right: Branch::side_height(branch.right()),
                    },
                    location: location.clone(),
                });
            }
            for side in [Side::Left, Side::Right] {
                if let Some(tree) = branch.side(side) {
                    location.side = Some(side);
                    check_tree(tree, &mut location, &mut violations);
                }
            }
            start += run.copies;
        }
    }
    ValidationReport { violations }
}

/// `Σ_j Σ_i q^{-n_ji} (1 - Σ_{k=2}^{n_ji+1} 1/g_k^{ji})`.
pub fn length_q<T: Scalar>(grope: &MultiGrope, q: &T) -> Result<T, GropeError> {
    if !q.is_at_least_one() {
        return Err(GropeError::QBelowOne);
    }
    validate(grope).into_result()?;
    let mut total = T::zero();
    for component in &grope.components {
        for run in &component.runs {
            total = total + T::from_count(run.copies as u128) * run.branch.term(q);
        }
    }
    Ok(total)
}

/// Glues two grope concordances along their common boundary; branch lists
/// concatenate componentwise, so lengths add.
pub fn glue(first: &MultiGrope, second: &MultiGrope) -> Result<MultiGrope, GropeError> {
    if first.components.len() != second.components.len() {
        return Err(GropeError::ComponentMismatch {
            left: first.components.len(),
            right: second.components.len(),
        });
    }
    let all = first.components.iter().chain(&second.components);
    if all.clone().any(|c| c.kind != BoundaryKind::Concordance) {
        return Err(GropeError::NotConcordance);
    }
    let components = first
        .components
        .iter()
        .zip(&second.components)
        .map(|(a, b)| {
            BranchGrope::from_runs(
                BoundaryKind::Concordance,
                a.runs.iter().chain(&b.runs).cloned(),
            )
        })
        .collect();
    Ok(MultiGrope::new(components))
}

/// Minimum branch length over all components.
pub fn min_branch_length(grope: &MultiGrope) -> Result<u32, GropeError> {
    grope
        .components
        .iter()
        .flat_map(|c| c.runs.iter())
        .map(|r| r.branch.length())
        .min()
        .ok_or(GropeError::NoBranches)
}

// Peels the first handle off a surface: the genus-1 piece keeps the first
// dual pair of children, the remainder keeps the rest.
fn peel(tree: &SymmetricTree) -> (SymmetricTree, SymmetricTree) {
    let children = tree.children();
    let (first, rest) = if children.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        (children[..2].to_vec(), children[2..].to_vec())
    };
    (
        SymmetricTree::new(1, first),
        SymmetricTree::new(tree.genus() - 1, rest),
    )
}

// Splits dual pairs until both members of every pair have genus one.
// Each split turns one pair into two, so the carrying surface gains a handle.
fn split_pairs(pairs: &mut Vec<(SymmetricTree, SymmetricTree)>) -> u64 {
    let mut splits = 0;
    let mut i = 0;
    while i < pairs.len() {
        let (a, b) = pairs[i].clone();
        if a.genus() >= 2 {
            let (a1, a2) = peel(&a);
            pairs.splice(i..=i, [(a1, b.clone()), (a2, b)]);
            splits += 1;
        } else if b.genus() >= 2 {
            let (b1, b2) = peel(&b);
            pairs.splice(i..=i, [(a.clone(), b1), (a, b2)]);
            splits += 1;
        } else {
            i += 1;
        }
    }
    splits
}

#[derive(Default)]
struct Splitter {
    memo: HashMap<usize, SymmetricTree>,
}

impl Splitter {
    // Makes every strict descendant genus one; the root may grow.
    fn normalize(&mut self, tree: &SymmetricTree) -> SymmetricTree {
        if tree.is_leaf() {
            return tree.clone();
        }
        if let Some(done) = self.memo.get(&tree.node_id()) {
            return done.clone();
        }
        let children: Vec<SymmetricTree> =
            tree.children().iter().map(|c| self.normalize(c)).collect();
        let mut pairs: Vec<_> = children
            .chunks(2)
            .map(|p| (p[0].clone(), p[1].clone()))
            .collect();
        split_pairs(&mut pairs);
        let genus = pairs.len() as u64;
        let children = pairs.into_iter().flat_map(|(a, b)| [a, b]).collect();
        let out = SymmetricTree::new(genus, children);
        self.memo.insert(tree.node_id(), out.clone());
        out
    }
}

/// Grope splitting on one branch: the chosen side's root surface loses a
/// handle, which becomes a new first stage handle carrying a copy of the
/// opposite side. First stage genus goes up by one; lengths are unchanged.
pub fn split_branch(
    grope: &BranchGrope,
    index: u64,
    side: Side,
) -> Result<BranchGrope, GropeError> {
    MultiGrope::single(grope.clone()).validate().into_result()?;
    let count = grope.branch_count();
    let (run_index, offset) = grope
        .locate(index)
        .ok_or(GropeError::BranchIndex { index, count })?;
    let run = &grope.runs[run_index];
    let tree = run
        .branch
        .side(side)
        .ok_or(GropeError::EmptySide { index, side })?;
    if tree.genus() < 2 {
        return Err(GropeError::NothingToSplit {
            index,
            side,
            genus: tree.genus(),
        });
    }
    let (first, rest) = peel(tree);
    let other = run.branch.side(side.opposite()).cloned();
    let make = |t: SymmetricTree| match side {
        Side::Left => Branch::new(Some(t), other.clone()),
        Side::Right => Branch::new(other.clone(), Some(t)),
    };

    let mut runs: Vec<BranchRun> = grope.runs[..run_index].to_vec();
    let one = |branch: Branch, copies: u64| BranchRun { branch, copies };
    runs.push(one(run.branch.clone(), offset));
    runs.push(one(make(first), 1));
    runs.push(one(make(rest), 1));
    runs.push(one(run.branch.clone(), run.copies - offset - 1));
    runs.extend(grope.runs[run_index + 1..].iter().cloned());
    Ok(BranchGrope::from_runs(grope.kind, runs))
}

/// Result of [`split_full_traced`].
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub grope: BranchGrope,
    /// Splits at the branch roots; each adds one first stage handle.
    pub root_splits: u64,
}

/// Splits until every surface above the first stage has genus one.
///
/// Order is fixed: within each branch the deepest surfaces are split
/// first; then branch roots are split left to right, left side before
/// right side.
pub fn split_full(grope: &BranchGrope) -> Result<BranchGrope, GropeError> {
    split_full_traced(grope).map(|o| o.grope)
}

pub fn split_full_traced(grope: &BranchGrope) -> Result<SplitOutcome, GropeError> {
    MultiGrope::single(grope.clone()).validate().into_result()?;
    let mut splitter = Splitter::default();
    let mut runs = Vec::new();
    let mut root_splits = 0;
    for run in &grope.runs {
        let left = run.branch.left().map(|t| splitter.normalize(t));
        let right = run.branch.right().map(|t| splitter.normalize(t));
        match (left, right) {
            (Some(l), Some(r)) if l.genus() >= 2 || r.genus() >= 2 => {
                let mut pairs = vec![(l, r)];
                root_splits += split_pairs(&mut pairs) * run.copies;
                for _ in 0..run.copies {
                    for (a, b) in &pairs {
                        runs.push(BranchRun {
                            branch: Branch::pair(a.clone(), b.clone()),
                            copies: 1,
                        });
                    }
                }
            }
            (l, r) => runs.push(BranchRun {
                branch: Branch::new(l, r),
                copies: run.copies,
            }),
        }
    }
    Ok(SplitOutcome {
        grope: BranchGrope::from_runs(grope.kind, runs),
        root_splits,
    })
}
