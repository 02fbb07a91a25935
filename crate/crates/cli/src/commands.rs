use std::path::Path;

use operad_rg::combinatorics::Permutation;
use operad_rg::contraction_operad::{
    closure_check, enumerate_diagrams, ContractionMap, ContractionOperad, QftModel, SystemFilter,
};
use operad_rg::formal_diffeo::{tuples, TruncationOrder};
use operad_rg::operad_group::{check_operad_axioms, AxiomCheckConfig, EndOperad, Operad, OperadGroup};
use operad_rg::wick_rg::{wick_differential, wick_enumerate, RgMorphism};
use operad_rg::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Failure;

/// Everything a verb needs: the model's carrier operad and the global flags.
pub struct Context {
    carrier: ContractionOperad,
    order: usize,
    seed: u64,
    cap: usize,
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

impl Context {
    pub fn new(model: QftModel, order: usize, seed: u64, cap: usize) -> Self {
        let system = model.system();
        Context { carrier: ContractionOperad::new(model, system, cap), order, seed, cap }
    }

    fn model(&self) -> &QftModel {
        self.carrier.model()
    }

    fn group(&self) -> Result<OperadGroup<'_, ContractionOperad>> {
        Ok(OperadGroup::new(&self.carrier, TruncationOrder::new(self.order)?))
    }

    fn components(&self, path: &Path) -> std::result::Result<Vec<ContractionMap>, Failure> {
        Ok(self.carrier.parse_components(&read(path)?, self.order)?)
    }

    /// Sorted monomials, one per line, and their count.
    pub fn diagrams(&self, n: usize) -> Result<(String, usize)> {
        let list = enumerate_diagrams(self.model(), n, self.cap)?;
        let sig = self.model().signature();
        Ok((list.iter().map(|m| format!("{}\n", m.render(sig))).collect(), list.len()))
    }

    pub fn compose(&self, g: &Path, h: &Path) -> std::result::Result<String, Failure> {
        let group = self.group()?;
        let g = group.element(self.components(g)?)?;
        let h = group.element(self.components(h)?)?;
        Ok(group.render(group.product(&g, &h)?.components()))
    }

    pub fn invert(&self, g: &Path) -> std::result::Result<String, Failure> {
        let group = self.group()?;
        let g = group.element(self.components(g)?)?;
        Ok(group.render(group.inverse(&g)?.components()))
    }

    pub fn exp(&self, l: &Path) -> std::result::Result<String, Failure> {
        let group = self.group()?;
        let l = group.lie_element(self.components(l)?)?;
        Ok(group.render(group.exp(&l)?.components()))
    }

    pub fn log(&self, g: &Path) -> std::result::Result<String, Failure> {
        let group = self.group()?;
        let g = group.element(self.components(g)?)?;
        Ok(group.render(group.log(&g)?.components()))
    }

    /// The coupling-space series, labelled by vertex-type names.
    pub fn rg_action(&self, g: &Path) -> std::result::Result<String, Failure> {
        let group = self.group()?;
        let g = group.element(self.components(g)?)?;
        let series = RgMorphism::new(&self.carrier).rg_action(&g)?;
        Ok(series.render(Some(&self.model().type_names())))
    }

    pub fn verify_axioms(&self, max_arity: usize, samples: usize) -> std::result::Result<String, Failure> {
        let cfg = AxiomCheckConfig {
            samples,
            max_arity,
            max_composite: (max_arity + 1).max(4),
            seed: self.seed,
            ..AxiomCheckConfig::default()
        };
        let report = check_operad_axioms(&self.carrier, &cfg)?;
        if report.passed() {
            Ok(format!("{report}\n"))
        } else {
            Err(Failure::Verification(report.to_string()))
        }
    }

    /// Each component system of the model, then their intersection.
    pub fn verify_closure(&self, max_arity: usize) -> std::result::Result<String, Failure> {
        let model = self.model();
        let mut systems = Vec::new();
        if model.require_1pi() {
            systems.push(("1PI", SystemFilter::one_pi()));
        }
        systems.push(("admissible", SystemFilter::admissible(model)));
        systems.push(("vertex types", SystemFilter::vertex_types(model)));
        systems.push(("model", model.system()));
        let mut out = String::new();
        for (name, s) in systems {
            let report = closure_check(&s, model, max_arity, self.cap)?;
            if !report.passed() {
                return Err(Failure::Verification(format!("{name} system: {report}")));
            }
            out.push_str(&format!("{name} system: {report}\n"));
        }
        Ok(out)
    }

    /// Pairing enumeration against the differential formula for every type tuple with at most `max_n` entries.
    pub fn verify_wick(&self, max_n: usize) -> std::result::Result<String, Failure> {
        let model = self.model();
        let mut checked = 0;
        for n in 1..=max_n {
            for types in tuples(model.vertex_types().len(), n) {
                let e = wick_enumerate(model, &types)?;
                let d = wick_differential(model, &types)?;
                if e != d {
                    let names: Vec<&str> = types.iter().map(|&k| model.vertex_types()[k].name.as_str()).collect();
                    return Err(Failure::Verification(format!(
                        "Wick sums differ for ({})\nenumerated:\n{}differential:\n{}",
                        names.join(","),
                        e.render(model.signature()),
                        d.render(model.signature())
                    )));
                }
                checked += 1;
            }
        }
        Ok(format!("Wick sums agree on {checked} type tuples with at most {max_n} vertices\n"))
    }

    /// Morphism law on random pairs of arity at most 2 and equivariance in arity 3.
    pub fn verify_morphism(&self, samples: usize) -> std::result::Result<String, Failure> {
        let op = &self.carrier;
        let rg = RgMorphism::new(op);
        let end = EndOperad::new(rg.dim())?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let render = |a: &ContractionMap| op.render(a);
        for _ in 0..samples {
            for (na, nb) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let a = op.sample(na, &mut rng);
                let b = op.sample(nb, &mut rng);
                for i in 1..=na {
                    let lhs = rg.morphism(&op.pcomp(&a, i, &b)?)?;
                    let rhs = end.pcomp(&rg.morphism(&a)?, i, &rg.morphism(&b)?)?;
                    if lhs != rhs {
                        return Err(Failure::Verification(format!(
                            "morphism law fails at slot {i} for\n{}∘\n{}",
                            render(&a),
                            render(&b)
                        )));
                    }
                }
            }
            let q = op.sample(3, &mut rng);
            let image = rg.morphism(&q)?;
            for s in Permutation::all(3) {
                if rg.morphism(&op.act(&q, &s)?)? != end.act(&image, &s)? {
                    return Err(Failure::Verification(format!("equivariance fails for {s} on\n{}", render(&q))));
                }
            }
        }
        Ok(format!("morphism law and equivariance hold on {samples} samples\n"))
    }
}
