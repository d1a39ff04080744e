use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{BlochError, LevelScheme};

/// Lindblad superoperator acting on row-major vectorised density matrices:
/// `ρ_ij` sits at index `i·n + j`.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    matrix: DMatrix<Complex64>,
    energies: Vec<f64>,
}

impl Liouvillian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Rotating-frame level energies (MHz) on the Hamiltonian diagonal.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.dim + j
    }

    /// `dρ/dt` for a density matrix given as a dense matrix.
    pub fn apply(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = self.dim;
        let v = DMatrix::from_fn(n * n, 1, |k, _| rho[(k / n, k % n)]);
        let out = &self.matrix * v;
        DMatrix::from_fn(n, n, |i, j| out[(i * n + j, 0)])
    }

    /// Total decay rate of the coherence `ρ_ij` (MHz).
    pub fn coherence_decay(&self, i: usize, j: usize) -> f64 {
        let k = self.index(i, j);
        -self.matrix[(k, k)].re
    }
}

/// Rotating-frame energies: every coupling `l → u` with detuning `Δ`
/// requires `E_u − E_l = z_u − z_l − Δ`.
fn frame_energies(scheme: &LevelScheme) -> Result<Vec<f64>, BlochError> {
    let n = scheme.dim();
    let mut energy: Vec<Option<f64>> = vec![None; n];
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for c in &scheme.couplings {
        let gap = scheme.levels[c.upper].zeeman_shift - scheme.levels[c.lower].zeeman_shift - c.detuning;
        adjacency[c.lower].push((c.upper, gap));
        adjacency[c.upper].push((c.lower, -gap));
    }
    for root in 0..n {
        if energy[root].is_some() {
            continue;
        }
        energy[root] = Some(scheme.levels[root].zeeman_shift);
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let ei = energy[i].expect("visited");
            for &(j, gap) in &adjacency[i] {
                if energy[j].is_none() {
                    energy[j] = Some(ei + gap);
                    queue.push_back(j);
                }
            }
        }
    }
    let energy: Vec<f64> = energy.into_iter().map(|e| e.expect("all levels visited")).collect();
    for (k, c) in scheme.couplings.iter().enumerate() {
        let gap = scheme.levels[c.upper].zeeman_shift - scheme.levels[c.lower].zeeman_shift - c.detuning;
        let mismatch = energy[c.upper] - energy[c.lower] - gap;
        let scale = 1.0 + gap.abs() + energy[c.upper].abs() + energy[c.lower].abs();
        if mismatch.abs() > 1e-9 * scale {
            return Err(BlochError::InconsistentFrame(k));
        }
    }
    Ok(energy)
}

/// Assembles the Lindblad superoperator of a validated scheme.
///
/// Couplings enter the Hamiltonian as `rabi·(e^{iφ}|u⟩⟨l| + h.c.)`. Decays and
/// pumping are jump operators `√rate·|lower⟩⟨upper|`; dephasings damp the
/// coherence pair directly at `rate`.
pub fn build_liouvillian(scheme: &LevelScheme) -> Result<Liouvillian, BlochError> {
    scheme.validate()?;
    let n = scheme.dim();
    let energies = frame_energies(scheme)?;
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for (i, &e) in energies.iter().enumerate() {
        h[(i, i)] = Complex64::new(e, 0.0);
    }
    for c in &scheme.couplings {
        let w = Complex64::from_polar(c.rabi, c.phase);
        h[(c.upper, c.lower)] += w;
        h[(c.lower, c.upper)] += w.conj();
    }

    let idx = |i: usize, j: usize| i * n + j;
    let mut s = DMatrix::<Complex64>::zeros(n * n, n * n);
    let minus_i = Complex64::new(0.0, -1.0);

    // -i[H, ρ]
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if h[(i, k)] != Complex64::new(0.0, 0.0) {
                    s[(idx(i, j), idx(k, j))] += minus_i * h[(i, k)];
                }
                if h[(k, j)] != Complex64::new(0.0, 0.0) {
                    s[(idx(i, j), idx(i, k))] -= minus_i * h[(k, j)];
                }
            }
        }
    }

    let jumps = scheme
        .decays
        .iter()
        .map(|d| (d.upper, d.lower, d.rate))
        .chain(scheme.pumping.iter().map(|p| (p.from, p.to, p.rate)));
    for (from, to, rate) in jumps {
        s[(idx(to, to), idx(from, from))] += rate;
        for k in 0..n {
            s[(idx(from, k), idx(from, k))] -= 0.5 * rate;
            s[(idx(k, from), idx(k, from))] -= 0.5 * rate;
        }
    }

    for d in &scheme.dephasings {
        let (a, b) = d.levels;
        s[(idx(a, b), idx(a, b))] -= d.rate;
        s[(idx(b, a), idx(b, a))] -= d.rate;
    }

    Ok(Liouvillian {
        dim: n,
        matrix: s,
        energies,
    })
}
