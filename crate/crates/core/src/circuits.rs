//! Architectures, brickwork ensembles, superblocks and sampled circuit instances.
//!
//! Qubits are 0-based in the API; displayed labels add one.

use crate::error::{Error, Result};
use crate::groups::clifford::{sample_uniform_clifford, CliffordGate, CliffordTableau};
use crate::groups::haar::{haar_orthogonal_matrix, haar_unitary_matrix};
use crate::groups::matchgate::{sample_haar_matchgate, MajoranaRotation};
use crate::groups::symplectic::{sample_haar_symplectic, SymplecticForm};
use crate::groups::GroupTag;
use crate::linalg::CMatrix;
use crate::rng::RngStream;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

pub const SPEC_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchitectureGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl ArchitectureGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
            return Err(Error::InvalidSpec("edge outside the qubit range".into()));
        }
        let g = ArchitectureGraph { n, edges };
        if n == 0 || g.distances(0).iter().any(|d| d.is_none()) {
            return Err(Error::InvalidSpec("architecture is not connected".into()));
        }
        Ok(g)
    }

    pub fn line(n: usize) -> Self {
        Self::new(n, (1..n).map(|q| (q - 1, q)).collect()).expect("a line is connected")
    }

    pub fn ring(n: usize) -> Self {
        let mut e: Vec<(usize, usize)> = (1..n).map(|q| (q - 1, q)).collect();
        if n > 2 {
            e.push((n - 1, 0));
        }
        Self::new(n, e).expect("a ring is connected")
    }

    pub fn all_to_all(n: usize) -> Self {
        let e = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self::new(n, e).expect("complete graph is connected")
    }

    fn neighbors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| if a == q { Some(b) } else if b == q { Some(a) } else { None })
    }

    /// BFS distances from `src`.
    pub fn distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut d = vec![None; self.n];
        d[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(q) = queue.pop_front() {
            let dq = d[q].unwrap();
            for nb in self.neighbors(q) {
                if d[nb].is_none() {
                    d[nb] = Some(dq + 1);
                    queue.push_back(nb);
                }
            }
        }
        d
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distances(a)[b].expect("connected")
    }

    pub fn diameter(&self) -> usize {
        (0..self.n).map(|q| self.distances(q).into_iter().flatten().max().unwrap_or(0)).max().unwrap_or(0)
    }

    /// The induced subgraph on `set` is connected.
    pub fn is_connected_subset(&self, set: &[usize]) -> bool {
        let Some(&first) = set.first() else { return true };
        let inside: BTreeSet<usize> = set.iter().copied().collect();
        let mut seen = BTreeSet::from([first]);
        let mut stack = vec![first];
        while let Some(q) = stack.pop() {
            for nb in self.neighbors(q) {
                if inside.contains(&nb) && seen.insert(nb) {
                    stack.push(nb);
                }
            }
        }
        seen.len() == inside.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BrickGate {
    /// Uniform (Haar) element of the brick's group.
    Haar,
    Identity,
    /// The same named single-qubit gate ("I" or "H") on every qubit of the support.
    Fixed(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BrickSpec {
    pub layer: usize,
    pub support: Vec<usize>,
    pub group: GroupTag,
    pub gate: BrickGate,
    /// Probability that the brick is replaced by the identity.
    #[serde(default)]
    pub identity_probability: f64,
    /// Matchgate bricks on non-intervals: realize the brick in the listed
    /// qubit order (its own Jordan–Wigner order) instead of rejecting it.
    #[serde(default)]
    pub local_order: bool,
}

impl BrickSpec {
    pub fn haar(layer: usize, support: Vec<usize>, group: GroupTag) -> Self {
        BrickSpec { layer, support, group, gate: BrickGate::Haar, identity_probability: 0.0, local_order: false }
    }

    pub fn identity_allowed(&self) -> bool {
        self.identity_probability > 0.0 || self.gate == BrickGate::Identity
    }

    /// Brick that can never act nontrivially.
    pub fn is_trivial(&self) -> bool {
        match &self.gate {
            BrickGate::Identity => true,
            BrickGate::Fixed(s) => s == "I",
            BrickGate::Haar => self.identity_probability >= 1.0,
        }
    }

    fn is_interval(&self) -> bool {
        self.support.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub layers: Vec<Vec<BrickSpec>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub arch: ArchitectureGraph,
    pub components: Vec<MixtureComponent>,
}

#[derive(Serialize, Deserialize)]
struct VersionedSpec {
    version: u32,
    circuit: CircuitSpec,
}

impl CircuitSpec {
    pub fn fixed(arch: ArchitectureGraph, layers: Vec<Vec<BrickSpec>>) -> Result<Self> {
        Self::mixture(arch, vec![MixtureComponent { weight: 1.0, layers }])
    }

    pub fn mixture(arch: ArchitectureGraph, components: Vec<MixtureComponent>) -> Result<Self> {
        let s = CircuitSpec { arch, components };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidSpec("no mixture components".into()));
        }
        let total: f64 = self.components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-9 || self.components.iter().any(|c| c.weight < 0.0) {
            return Err(Error::InvalidSpec(format!("mixture weights sum to {total}")));
        }
        for comp in &self.components {
            for (l, layer) in comp.layers.iter().enumerate() {
                let mut used = BTreeSet::new();
                for b in layer {
                    if b.layer != l {
                        return Err(Error::InvalidSpec(format!("brick tagged layer {} sits in layer {l}", b.layer)));
                    }
                    if b.support.is_empty() || b.support.iter().any(|&q| q >= self.arch.n || !used.insert(q)) {
                        return Err(Error::InvalidSpec(format!("overlapping or invalid support {:?} in layer {l}", b.support)));
                    }
                    if !(0.0..=1.0).contains(&b.identity_probability) {
                        return Err(Error::InvalidSpec("identity probability outside [0,1]".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.arch.n
    }

    pub fn depth(&self) -> usize {
        self.components.iter().map(|c| c.layers.len()).max().unwrap_or(0)
    }

    /// Largest brick arity.
    pub fn arity(&self) -> usize {
        self.components.iter().flat_map(|c| c.layers.iter().flatten()).map(|b| b.support.len()).max().unwrap_or(0)
    }

    /// 1D brickwork of r-qubit bricks. Layer ℓ starts its tiling at offset
    /// ℓ mod 2 for r = 2 and (ℓ + r/2) mod r otherwise; boundary pieces are
    /// shorter bricks. Symplectic pieces of even size are split into single
    /// qubits. Periodic boundaries add the wraparound brick (n−1, 0) on odd
    /// layers when r = 2 and n is even.
    pub fn brickwork_1d(n: usize, depth: usize, group: GroupTag, r: usize, boundary: Boundary) -> Result<Self> {
        if r == 0 || r > n {
            return Err(Error::InvalidSpec(format!("brick arity {r} on {n} qubits")));
        }
        if group == GroupTag::Sp && r % 2 == 0 {
            return Err(Error::NoSymplecticForm(format!("symplectic bricks need odd arity, got {r}")));
        }
        let arch = match boundary {
            Boundary::Open => ArchitectureGraph::line(n),
            Boundary::Periodic => ArchitectureGraph::ring(n),
        };
        let mut layers = vec![];
        for l in 0..depth {
            let offset = if r == 2 { l % 2 } else { (l + r / 2) % r };
            let mut pieces: Vec<Vec<usize>> = vec![];
            if offset > 0 {
                pieces.push((0..offset.min(n)).collect());
            }
            let mut s = offset;
            while s < n {
                pieces.push((s..(s + r).min(n)).collect());
                s += r;
            }
            if boundary == Boundary::Periodic && r == 2 && n % 2 == 0 && n > 2 && offset == 1 {
                pieces.retain(|p| p.len() == 2);
                pieces.push(vec![n - 1, 0]);
            }
            let mut layer = vec![];
            for p in pieces {
                if group == GroupTag::Sp && p.len() % 2 == 0 {
                    layer.extend(p.into_iter().map(|q| BrickSpec::haar(l, vec![q], group)));
                } else {
                    layer.push(BrickSpec::haar(l, p, group));
                }
            }
            layers.push(layer);
        }
        Self::fixed(arch, layers)
    }

    /// Equal-weight mixture of "I on every qubit" and "H on every qubit".
    pub fn global_identity_hadamard_mixture(n: usize) -> Result<Self> {
        let comp = |name: &str| MixtureComponent {
            weight: 0.5,
            layers: vec![(0..n)
                .map(|q| BrickSpec {
                    layer: 0,
                    support: vec![q],
                    group: GroupTag::Cl,
                    gate: BrickGate::Fixed(name.into()),
                    identity_probability: 0.0,
                    local_order: false,
                })
                .collect()],
        };
        Self::mixture(ArchitectureGraph::line(n), vec![comp("I"), comp("H")])
    }

    pub fn reversed(&self) -> CircuitSpec {
        let components = self
            .components
            .iter()
            .map(|c| {
                let layers = c
                    .layers
                    .iter()
                    .rev()
                    .enumerate()
                    .map(|(l, layer)| layer.iter().map(|b| BrickSpec { layer: l, ..b.clone() }).collect())
                    .collect();
                MixtureComponent { weight: c.weight, layers }
            })
            .collect();
        CircuitSpec { arch: self.arch.clone(), components }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(&VersionedSpec { version: SPEC_VERSION, circuit: self.clone() }).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        let v: VersionedSpec = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if v.version != SPEC_VERSION {
            return Err(Error::Parse(format!("unsupported circuit spec version {}", v.version)));
        }
        v.circuit.validate()?;
        Ok(v.circuit)
    }
}

fn grow(cone: &BTreeSet<usize>, layer: &[BrickSpec]) -> BTreeSet<usize> {
    let mut out = cone.clone();
    for b in layer {
        if !b.is_trivial() && b.support.iter().any(|q| cone.contains(q)) {
            out.extend(b.support.iter().copied());
        }
    }
    out
}

/// Forward lightcone of `start` after each layer (index 0 = start), taking
/// the union over mixture components.
pub fn lightcone(spec: &CircuitSpec, start: &[usize]) -> Vec<BTreeSet<usize>> {
    let depth = spec.depth();
    let mut out = vec![start.iter().copied().collect::<BTreeSet<_>>(); depth + 1];
    for comp in &spec.components {
        let mut cone: BTreeSet<usize> = start.iter().copied().collect();
        for (d, layer) in comp.layers.iter().enumerate() {
            cone = grow(&cone, layer);
            out[d + 1].extend(cone.iter().copied());
        }
        for d in comp.layers.len() + 1..=depth {
            out[d].extend(cone.iter().copied());
        }
    }
    out
}

/// Backward lightcone: qubits at the input that can influence `end` after the
/// full circuit, grown from the last layer to the first.
pub fn backward_lightcone(spec: &CircuitSpec, end: &[usize]) -> BTreeSet<usize> {
    let mut total = BTreeSet::new();
    for comp in &spec.components {
        let mut cone: BTreeSet<usize> = end.iter().copied().collect();
        for layer in comp.layers.iter().rev() {
            cone = grow(&cone, layer);
        }
        total.extend(cone);
    }
    total
}

/// Outcome of the local-independence check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalIndependence {
    pub independent: bool,
    /// A pair of qubits at distance ≥ diameter/2 whose gate sets share a latent variable.
    pub witness: Option<(usize, usize)>,
    pub warning: Option<String>,
}

/// Gates touching qubit x (identity bricks excluded), per component.
fn gate_set(comp: &MixtureComponent, x: usize) -> Vec<(usize, Vec<usize>, BrickGate, GroupTag)> {
    comp.layers
        .iter()
        .flatten()
        .filter(|b| !b.is_trivial() && b.support.contains(&x))
        .map(|b| (b.layer, b.support.clone(), b.gate.clone(), b.group))
        .collect()
}

/// Bricks are sampled from disjoint sub-streams, so the only shared latent
/// variable is the mixture component. A pair (x, y) violates independence when
/// both gate sets depend on the component and dist(x, y) ≥ diameter/2.
pub fn is_locally_independent(spec: &CircuitSpec) -> LocalIndependence {
    let dia = spec.arch.diameter();
    if dia <= 1 {
        return LocalIndependence {
            independent: true,
            witness: None,
            warning: Some("diameter ≤ 1: local independence is vacuous".into()),
        };
    }
    let n = spec.n();
    let dependent: Vec<bool> = (0..n)
        .map(|x| {
            let first = gate_set(&spec.components[0], x);
            spec.components.iter().skip(1).any(|c| c.weight > 0.0 && gate_set(c, x) != first)
        })
        .collect();
    for x in 0..n {
        if !dependent[x] {
            continue;
        }
        let dist = spec.arch.distances(x);
        for y in x + 1..n {
            if dependent[y] && 2 * dist[y].unwrap() >= dia {
                return LocalIndependence { independent: false, witness: Some((x, y)), warning: None };
            }
        }
    }
    LocalIndependence { independent: true, witness: None, warning: None }
}

/// Two-layer superblock construction on m = n/ξ patches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperblockSpec {
    pub n: usize,
    pub xi: usize,
    pub groups: [GroupTag; 2],
    pub boundary: Boundary,
}

impl SuperblockSpec {
    pub fn new(n: usize, xi: usize, group: GroupTag) -> Self {
        SuperblockSpec { n, xi, groups: [group, group], boundary: Boundary::Periodic }
    }

    pub fn patches(&self) -> usize {
        self.n / self.xi
    }
}

/// Layer 1 blocks cover patches (1,2),(3,4),…; layer 2 covers (2,3),…,(m,1).
/// For matchgates the wraparound block is not an interval: with an open
/// boundary it is split into its two patches; with a periodic boundary it is
/// kept as a block in its own local order (patch m, then patch 1).
pub fn build_superblock(spec: &SuperblockSpec) -> Result<CircuitSpec> {
    let (n, xi) = (spec.n, spec.xi);
    if xi == 0 || n % xi != 0 {
        return Err(Error::InvalidSpec(format!("n = {n} is not a multiple of ξ = {xi}")));
    }
    let m = n / xi;
    if m % 2 != 0 || m < 2 {
        return Err(Error::InvalidSpec(format!("patch count m = {m} must be even")));
    }
    let patch = |p: usize| (p * xi..(p + 1) * xi).collect::<Vec<_>>();
    let mut layers = vec![vec![], vec![]];
    for i in 0..m / 2 {
        let mut s = patch(2 * i);
        s.extend(patch(2 * i + 1));
        layers[0].push(BrickSpec::haar(0, s, spec.groups[0]));
    }
    let g2 = spec.groups[1];
    for i in 0..m / 2 {
        let (a, b) = (2 * i + 1, (2 * i + 2) % m);
        let wraps = b < a;
        if wraps && spec.boundary == Boundary::Open {
            layers[1].push(BrickSpec::haar(1, patch(a), g2));
            layers[1].push(BrickSpec::haar(1, patch(b), g2));
            continue;
        }
        let mut s = patch(a);
        s.extend(patch(b));
        let mut brick = BrickSpec::haar(1, s, g2);
        brick.local_order = wraps && g2 == GroupTag::M;
        layers[1].push(brick);
    }
    let arch = if m == 2 && xi == 1 { ArchitectureGraph::line(n) } else { ArchitectureGraph::ring(n) };
    CircuitSpec::fixed(arch, layers)
}

// ---------------------------------------------------------------------------
// Instances

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateElement {
    Identity,
    /// Unitary on the support (first support qubit = most significant).
    Dense(CMatrix),
    Clifford(CliffordTableau),
    /// Rotation in the support's own Jordan–Wigner order.
    Matchgate(MajoranaRotation),
}

impl GateElement {
    pub fn to_local_dense(&self, r: usize) -> Result<CMatrix> {
        match self {
            GateElement::Identity => Ok(CMatrix::identity(1 << r)),
            GateElement::Dense(m) => Ok(m.clone()),
            GateElement::Clifford(t) => Ok(t.to_dense()?.into_mat()),
            GateElement::Matchgate(o) => o.to_dense_matrix(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacedGate {
    pub layer: usize,
    pub support: Vec<usize>,
    pub group: GroupTag,
    pub element: GateElement,
    pub local_order: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitInstance {
    pub n: usize,
    pub component: usize,
    pub gates: Vec<PlacedGate>,
}

impl CircuitInstance {
    pub fn identity(n: usize) -> Self {
        CircuitInstance { n, component: 0, gates: vec![] }
    }

    /// Dense unitary of the whole circuit (n ≤ 12).
    pub fn to_dense(&self) -> Result<CMatrix> {
        crate::operator::check_cap(1 << self.n)?;
        let d = 1usize << self.n;
        let mut u = CMatrix::identity(d);
        for g in &self.gates {
            let local = g.element.to_local_dense(g.support.len())?;
            // apply to every column
            let mut cols = u.transpose();
            for c in 0..d {
                crate::operator::apply_gate(&mut cols.data_mut()[c * d..(c + 1) * d], self.n, &g.support, &local);
            }
            u = cols.transpose();
        }
        Ok(u)
    }
}

fn fixed_gate(name: &str, r: usize, group: GroupTag) -> Result<GateElement> {
    let gates: Vec<CliffordGate> = match name {
        "I" => vec![],
        "H" => (0..r).map(CliffordGate::H).collect(),
        _ => return Err(Error::InvalidSpec(format!("unknown fixed gate {name}"))),
    };
    let t = CliffordTableau::from_gates(r, &gates);
    if group == GroupTag::Cl {
        Ok(GateElement::Clifford(t))
    } else {
        Ok(GateElement::Dense(t.to_dense()?.into_mat()))
    }
}

/// Uniform element of `group` on r qubits.
pub fn sample_group_element<R: Rng + ?Sized>(group: GroupTag, r: usize, rng: &mut R) -> Result<GateElement> {
    Ok(match group {
        GroupTag::U => GateElement::Dense(haar_unitary_matrix(1 << r, rng)),
        GroupTag::O => GateElement::Dense(haar_orthogonal_matrix(1 << r, rng).to_complex()),
        GroupTag::Sp => GateElement::Dense(sample_haar_symplectic(r, &SymplecticForm::standard(r)?, rng)?.into_mat()),
        GroupTag::Cl => GateElement::Clifford(sample_uniform_clifford(r, rng)),
        GroupTag::M => GateElement::Matchgate(sample_haar_matchgate(r, rng)),
    })
}

/// Draws one circuit. The component choice uses sub-stream 0 of `stream`;
/// brick j (counted across layers) uses sub-stream j + 1.
pub fn sample_circuit(spec: &CircuitSpec, stream: &RngStream) -> Result<CircuitInstance> {
    let u: f64 = stream.derive(0).rng().gen();
    let mut acc = 0.0;
    let mut ci = spec.components.len() - 1;
    for (i, c) in spec.components.iter().enumerate() {
        acc += c.weight;
        if u < acc {
            ci = i;
            break;
        }
    }
    let comp = &spec.components[ci];
    let mut gates = vec![];
    let mut j = 0u64;
    for layer in &comp.layers {
        for b in layer {
            j += 1;
            let r = b.support.len();
            if b.group == GroupTag::M && !b.is_interval() && !b.local_order {
                return Err(Error::InvalidSpec(format!("matchgate brick on non-interval {:?}", b.support)));
            }
            if b.group == GroupTag::Sp && r % 2 == 0 {
                return Err(Error::NoSymplecticForm(format!("symplectic brick on {r} qubits")));
            }
            let mut rng = stream.derive(j).rng();
            let skip = b.identity_probability > 0.0 && rng.gen::<f64>() < b.identity_probability;
            let element = if skip {
                GateElement::Identity
            } else {
                match &b.gate {
                    BrickGate::Identity => GateElement::Identity,
                    BrickGate::Fixed(name) => fixed_gate(name, r, b.group)?,
                    BrickGate::Haar => sample_group_element(b.group, r, &mut rng)?,
                }
            };
            gates.push(PlacedGate { layer: b.layer, support: b.support.clone(), group: b.group, element, local_order: b.local_order });
        }
    }
    Ok(CircuitInstance { n: spec.n(), component: ci, gates })
}
