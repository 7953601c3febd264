use crate::circuits::{CircuitInstance, GateElement};
use crate::error::{Error, Result};
use crate::groups::clifford::CliffordTableau;
use crate::operator::PauliString;

/// Stabilizer state given by n commuting, independent generators.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerState {
    pub n: usize,
    pub generators: Vec<PauliString>,
}

impl StabilizerState {
    pub fn zero(n: usize) -> Self {
        StabilizerState { n, generators: (0..n).map(|q| PauliString::single(n, q, 'Z')).collect() }
    }

    pub fn apply_clifford(&mut self, t: &CliffordTableau, support: &[usize]) {
        for g in self.generators.iter_mut() {
            *g = t.conjugate_on(g, support);
        }
    }

    pub fn apply_circuit(&mut self, c: &CircuitInstance) -> Result<()> {
        for g in &c.gates {
            match &g.element {
                GateElement::Identity => {}
                GateElement::Clifford(t) => self.apply_clifford(t, &g.support),
                _ => return Err(Error::Routing("stabilizer backend accepts only Clifford gates".into())),
            }
        }
        Ok(())
    }

    /// ⟨ψ|P|ψ⟩ ∈ {−1, 0, +1} (0 also for non-Hermitian phases that cancel).
    pub fn expectation(&self, p: &PauliString) -> i8 {
        assert_eq!(p.n, self.n);
        if self.generators.iter().any(|g| !g.commutes(p)) {
            return 0;
        }
        // P commutes with the full stabilizer group, so ±P (up to phase) is in it.
        // Solve for the combination by elimination on (x, z) bit vectors.
        let n = self.n;
        let mut rows: Vec<(u128, u64)> =
            self.generators.iter().enumerate().map(|(i, g)| (((g.x as u128) << 64) | g.z as u128, 1u64 << i)).collect();
        let mut pivots: Vec<(u32, usize)> = vec![];
        for r in 0..rows.len() {
            for &(bit, pr) in &pivots {
                if rows[r].0 >> bit & 1 == 1 {
                    rows[r].0 ^= rows[pr].0;
                    rows[r].1 ^= rows[pr].1;
                }
            }
            if rows[r].0 != 0 {
                let bit = 127 - rows[r].0.leading_zeros();
                for &(_, pr) in &pivots {
                    if rows[pr].0 >> bit & 1 == 1 {
                        let (v, m) = rows[r];
                        rows[pr].0 ^= v;
                        rows[pr].1 ^= m;
                    }
                }
                pivots.push((bit, r));
            }
        }
        let mut target = ((p.x as u128) << 64) | p.z as u128;
        let mut combo = 0u64;
        for &(bit, r) in &pivots {
            if target >> bit & 1 == 1 {
                target ^= rows[r].0;
                combo ^= rows[r].1;
            }
        }
        if target != 0 {
            return 0;
        }
        let mut prod = PauliString::identity(n);
        for i in 0..n {
            if combo >> i & 1 == 1 {
                prod = prod.mul(&self.generators[i]);
            }
        }
        // prod = i^a σ, p = i^b σ  ⇒  ⟨p⟩ = i^{b−a}
        match (p.phase + 4 - prod.phase) % 4 {
            0 => 1,
            2 => -1,
            _ => 0,
        }
    }
}
