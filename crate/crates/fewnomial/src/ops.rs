//! Instrumentation: a tally of abstract field operations and comparisons.
//!
//! Counts reflect the operations the algorithms perform on real numbers,
//! independent of the numeric backend executing them. Bignum or interval
//! internals are never charged; wall time is reported separately by callers
//! that care about bit-level cost.

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub adds: u64,
    pub muls: u64,
    pub divs: u64,
    pub cmps: u64,
    /// Evaluations of a target function phi (HYBRID's unit of account).
    pub evals_phi: u64,
    /// Evaluations of phi'.
    pub evals_phi_prime: u64,
    /// Largest compressed Sturm chain index K observed.
    pub max_chain_k: u64,
}

impl OpCounter {
    pub fn new() -> OpCounter {
        OpCounter::default()
    }

    pub fn add(&mut self, n: u64) {
        self.adds += n;
    }

    pub fn mul(&mut self, n: u64) {
        self.muls += n;
    }

    pub fn div(&mut self, n: u64) {
        self.divs += n;
    }

    pub fn cmp(&mut self, n: u64) {
        self.cmps += n;
    }

    pub fn eval_phi(&mut self, n: u64) {
        self.evals_phi += n;
    }

    pub fn eval_phi_prime(&mut self, n: u64) {
        self.evals_phi_prime += n;
    }

    pub fn note_chain_k(&mut self, k: u64) {
        self.max_chain_k = self.max_chain_k.max(k);
    }

    /// Field operations in the paper's arithmetic model.
    pub fn field_ops(&self) -> u64 {
        self.adds + self.muls + self.divs
    }

    /// Field operations plus comparisons.
    pub fn total_ops(&self) -> u64 {
        self.field_ops() + self.cmps
    }

    pub fn evals(&self) -> u64 {
        self.evals_phi + self.evals_phi_prime
    }

    pub fn absorb(&mut self, o: &OpCounter) {
        self.adds += o.adds;
        self.muls += o.muls;
        self.divs += o.divs;
        self.cmps += o.cmps;
        self.evals_phi += o.evals_phi;
        self.evals_phi_prime += o.evals_phi_prime;
        self.max_chain_k = self.max_chain_k.max(o.max_chain_k);
    }
}

impl std::fmt::Display for OpCounter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "adds={} muls={} divs={} cmps={} evals={}",
            self.adds,
            self.muls,
            self.divs,
            self.cmps,
            self.evals()
        )
    }
}
