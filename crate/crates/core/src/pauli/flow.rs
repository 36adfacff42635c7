//! Logical-operator tracking through a sequence of snapshot Hamiltonians.

use super::string::{Phase, PauliString};

/// The four logical operators of a control/target pair.
#[derive(Clone, Debug)]
pub struct LogicalSet {
    pub x_c: PauliString,
    pub z_c: PauliString,
    pub x_t: PauliString,
    pub z_t: PauliString,
}

impl LogicalSet {
    pub fn named(&self) -> [(&'static str, &PauliString); 4] {
        [("Xc", &self.x_c), ("Zc", &self.z_c), ("Xt", &self.x_t), ("Zt", &self.z_t)]
    }

    /// CNOT images expressed in the input logical operators.
    pub fn cnot_images(&self) -> [PauliString; 4] {
        [
            self.x_c.multiply(&self.x_t),
            self.z_c.clone(),
            self.x_t.clone(),
            self.z_c.multiply(&self.z_t),
        ]
    }
}

/// One representative in a tracked chain.
#[derive(Clone, Debug)]
pub struct FlowStep {
    pub representative: PauliString,
    /// Snapshot indices (0-based) whose every term commutes with the representative.
    pub valid_snapshots: Vec<usize>,
    /// (snapshot, term) pairs multiplied into the previous representative.
    pub multipliers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct LogicalFlow {
    pub name: String,
    pub steps: Vec<FlowStep>,
    /// Final representative, or `None` when no chain was found within the cap.
    pub output: Option<PauliString>,
    /// Relative phase between output and expected image, modulo final stabilizers.
    pub sign: Option<Phase>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct FlowReport {
    pub flows: Vec<LogicalFlow>,
    pub depth_cap: usize,
    pub pass: bool,
}

impl FlowReport {
    pub fn flow(&self, name: &str) -> Option<&LogicalFlow> {
        self.flows.iter().find(|f| f.name == name)
    }
}

fn commutes_all(p: &PauliString, terms: &[PauliString]) -> bool {
    terms.iter().all(|t| p.commutes(t))
}

fn valid_set(p: &PauliString, snapshots: &[Vec<PauliString>]) -> Vec<usize> {
    (0..snapshots.len()).filter(|&k| commutes_all(p, &snapshots[k])).collect()
}

/// Visit k-subsets of 0..n in lexicographic order until `f` returns true.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn product(terms: &[PauliString], idx: &[usize], n: usize) -> PauliString {
    idx.iter().fold(PauliString::identity(n), |acc, &i| acc.multiply(&terms[i]))
}

/// Smallest subset of `terms` whose product commutes with all of `terms` and
/// turns `rep` into a string accepted by `accept`.
fn find_multiplier(
    rep: &PauliString,
    terms: &[PauliString],
    budget: usize,
    accept: &dyn Fn(&PauliString) -> bool,
) -> Option<(Vec<usize>, PauliString)> {
    let n = rep.n_qubits();
    for size in 1..=budget.min(terms.len()) {
        let mut found = None;
        for_each_subset(terms.len(), size, &mut |idx| {
            let m = product(terms, idx, n);
            if !commutes_all(&m, terms) {
                return false;
            }
            let cand = rep.multiply(&m);
            if accept(&cand) {
                found = Some((idx.to_vec(), cand));
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn track(
    start: &PauliString,
    snapshots: &[Vec<PauliString>],
    data_mask: u64,
    cap: usize,
) -> (Vec<FlowStep>, Option<PauliString>) {
    let last = snapshots.len() - 1;
    let mut steps = vec![FlowStep {
        representative: start.clone(),
        valid_snapshots: valid_set(start, snapshots),
        multipliers: vec![],
    }];
    if !commutes_all(start, &snapshots[0]) {
        return (steps, None);
    }
    let mut rep = start.clone();
    let mut used = 0usize;
    let mut k = 0usize;
    loop {
        if k == last {
            if rep.support() & !data_mask == 0 {
                return (steps, Some(rep));
            }
            let accept = |c: &PauliString| c.support() & !data_mask == 0;
            match find_multiplier(&rep, &snapshots[k], cap - used, &accept) {
                Some((idx, next)) => {
                    steps.push(FlowStep {
                        valid_snapshots: valid_set(&next, snapshots),
                        representative: next.clone(),
                        multipliers: idx.iter().map(|&i| (k, i)).collect(),
                    });
                    return (steps, Some(next));
                }
                None => return (steps, None),
            }
        }
        if commutes_all(&rep, &snapshots[k + 1]) {
            k += 1;
            continue;
        }
        let following = &snapshots[k + 1];
        let accept = |c: &PauliString| commutes_all(c, following);
        match find_multiplier(&rep, &snapshots[k], cap - used, &accept) {
            Some((idx, next)) => {
                used += idx.len();
                steps.push(FlowStep {
                    valid_snapshots: valid_set(&next, snapshots),
                    representative: next.clone(),
                    multipliers: idx.iter().map(|&i| (k, i)).collect(),
                });
                rep = next;
                k += 1;
            }
            None => return (steps, None),
        }
    }
}

/// GF(2) row-reduced basis over symplectic vectors, with the Pauli product
/// (phase included) that each basis row stands for.
struct Span {
    rows: Vec<(u128, PauliString)>,
}

impl Span {
    fn new(gens: &[PauliString]) -> Span {
        let mut s = Span { rows: Vec::new() };
        for g in gens {
            s.insert(g.clone());
        }
        s
    }

    fn reduce(&self, mut v: u128, mut acc: PauliString) -> (u128, PauliString) {
        for (row, p) in &self.rows {
            let pivot = 127 - row.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= row;
                acc = acc.multiply(p);
            }
        }
        (v, acc)
    }

    fn insert(&mut self, g: PauliString) {
        let (v, p) = self.reduce(g.symplectic(), g);
        if v == 0 {
            return;
        }
        self.rows.push((v, p));
        // decreasing pivot order keeps reduction single-pass
        self.rows.sort_by_key(|r| r.0.leading_zeros());
    }

    /// Returns the product of generators equal to `target` up to phase.
    fn express(&self, target: &PauliString) -> Option<PauliString> {
        let (v, acc) = self.reduce(target.symplectic(), PauliString::identity(target.n_qubits()));
        if v == 0 {
            Some(acc)
        } else {
            None
        }
    }
}

/// Phase `s` with `a = s * b * g` for some stabilizer `g` of `terms`, where
/// stabilizer elements are products of terms commuting with every term.
pub fn equivalent_modulo(a: &PauliString, b: &PauliString, terms: &[PauliString]) -> Option<Phase> {
    let diff = a.multiply(b);
    if !commutes_all(&diff, terms) {
        return None;
    }
    let g = Span::new(terms).express(&diff)?;
    let bg = b.multiply(&g);
    if a.same_letters(&bg) {
        Some(a.phase() * bg.phase().conj())
    } else {
        None
    }
}

/// Track the four logical operators through `snapshots` and compare the
/// induced map with CNOT. The data qubits are the union of the supports of
/// the initial logicals; final representatives must live on them.
pub fn verify_flow(snapshots: &[Vec<PauliString>], logicals: &LogicalSet) -> FlowReport {
    assert!(!snapshots.is_empty(), "no snapshots");
    let named = logicals.named();
    let data_mask = named.iter().fold(0u64, |m, (_, p)| m | p.support());
    let half_len = named[0].1.n_qubits() / 3;
    let cap = 2 * half_len.max(1) + 2;
    let images = logicals.cnot_images();
    let last = snapshots.last().unwrap();
    let mut flows = Vec::with_capacity(4);
    for ((name, start), expected) in named.iter().zip(images.iter()) {
        let (steps, output) = track(start, snapshots, data_mask, cap);
        let sign = output.as_ref().and_then(|o| equivalent_modulo(o, expected, last));
        let pass = matches!(sign, Some(s) if s.is_real());
        flows.push(LogicalFlow { name: name.to_string(), steps, output, sign, pass });
    }
    let pass = flows.iter().all(|f| f.pass);
    FlowReport { flows, depth_cap: cap, pass }
}

/// True iff every weight-1 Z commutes with every representative of Z̄_c and Z̄_t.
pub fn bias_check(report: &FlowReport) -> bool {
    let mut reps = Vec::new();
    for name in ["Zc", "Zt"] {
        match report.flow(name) {
            Some(f) => reps.extend(f.steps.iter().map(|s| &s.representative)),
            None => return false,
        }
    }
    reps.iter().all(|r| {
        let n = r.n_qubits();
        (0..n).all(|q| {
            let z = PauliString::from_sparse(n, &[(q, super::string::Letter::Z)]);
            z.commutes(r)
        })
    })
}
