#![allow(dead_code)]

use nslab::lab::gen_random_graph;
use nslab::problems::{
    gen_random_matcomp, gen_random_max_eig, laplacian_from_edges, AbsLinearProblem, EigDecomp,
    LesHouchesProblem, MatCompInstance, MaxCutInstance, MaxEigInstance,
};
use nslab::smoothing::{Smoothed, SmoothedVecMax};
use nslab::{Objective, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn normal_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vector {
    Vector::from_fn(n, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

/// Central differences, one coordinate at a time.
pub fn fd_gradient(p: &dyn Objective, x: &Vector, h: f64) -> Vector {
    Vector::from_fn(x.len(), |i, _| {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[i] += h;
        xm[i] -= h;
        (p.eval(&xp).unwrap().f - p.eval(&xm).unwrap().f) / (2.0 * h)
    })
}

pub fn rel_diff(a: &Vector, b: &Vector) -> f64 {
    (a - b).norm() / b.norm()
}

fn gap(m: &nslab::Matrix) -> (f64, f64) {
    let e = EigDecomp::new(m).unwrap();
    (e.lambdas[0], e.lambdas[0] - e.lambdas[1])
}

pub fn max_eig_instance(seed: u64) -> MaxEigInstance {
    gen_random_max_eig(seed, 10, 5).unwrap()
}

pub fn maxcut_instance(seed: u64) -> MaxCutInstance {
    let n = 8;
    let lap = laplacian_from_edges(&gen_random_graph(seed, n, 0.5).unwrap(), n).unwrap();
    MaxCutInstance::new(lap, 2.0 * n as f64).unwrap()
}

pub fn matcomp_instance(seed: u64) -> MatCompInstance {
    gen_random_matcomp(seed, 4, 5, 2, 0.6)
        .unwrap()
        .into_instance(20.0)
        .unwrap()
}

/// An oracle plus a sampler of points where its gradient is well defined
/// (for nonsmooth oracles: maximizer margin or eigen-gap above 1e-3).
pub type Sampler = Box<dyn Fn(&mut ChaCha8Rng) -> Option<Vector>>;

pub struct OracleCase {
    pub name: String,
    pub objective: Box<dyn Objective + Send>,
    pub h: f64,
    sampler: Sampler,
}

impl OracleCase {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vector {
        loop {
            if let Some(x) = (self.sampler)(rng) {
                return x;
            }
        }
    }

    /// Worst relative gradient mismatch over `count` points.
    pub fn worst_mismatch(&self, rng: &mut ChaCha8Rng, count: usize) -> f64 {
        (0..count)
            .map(|_| {
                let x = self.sample(rng);
                let g = self.objective.eval(&x).unwrap().g;
                rel_diff(&fd_gradient(&*self.objective, &x, self.h), &g)
            })
            .fold(0.0, f64::max)
    }
}

const MARGIN: f64 = 1e-3;

pub fn nonsmooth_cases(seed: u64) -> Vec<OracleCase> {
    let me = max_eig_instance(seed);
    let mc = maxcut_instance(seed);
    let mt = matcomp_instance(seed);
    let (me2, mc2, mt2) = (me.clone(), mc.clone(), mt.clone());
    vec![
        OracleCase {
            name: "abs_linear".into(),
            objective: Box::new(AbsLinearProblem::new(3.0, 5).unwrap()),
            h: 1e-5,
            sampler: Box::new(|rng| Some(normal_vec(rng, 5, 1.0)).filter(|x| x[0].abs() > MARGIN)),
        },
        OracleCase {
            name: "les_houches".into(),
            objective: Box::new(LesHouchesProblem::new(8).unwrap()),
            h: 1e-6,
            sampler: Box::new(|rng| {
                let x = normal_vec(rng, 8, 1.0);
                let mut t: Vec<f64> = (0..8)
                    .map(|i| {
                        if i == 0 {
                            x[0].abs()
                        } else {
                            (x[i] - 2.0 * x[i - 1]).abs()
                        }
                    })
                    .collect();
                t.sort_by(|a, b| b.total_cmp(a));
                (t[0] - t[1] > MARGIN).then_some(x)
            }),
        },
        OracleCase {
            name: "max_eig".into(),
            objective: Box::new(me),
            h: 1e-6,
            sampler: Box::new(move |rng| {
                let y = normal_vec(rng, 5, 1.0);
                Some(y).filter(|y| gap(&me2.w(y)).1 > MARGIN)
            }),
        },
        OracleCase {
            name: "maxcut_penalty".into(),
            objective: Box::new(mc),
            h: 1e-6,
            sampler: Box::new(move |rng| {
                let y = normal_vec(rng, 8, 1.0);
                let (top, g) = gap(&mc2.m(&y));
                (top.abs() > MARGIN && g > MARGIN).then_some(y)
            }),
        },
        OracleCase {
            name: "matcomp_penalty".into(),
            objective: Box::new(mt),
            h: 1e-6,
            sampler: Box::new(move |rng| {
                let y = normal_vec(rng, mt2.nobs(), 3.0);
                let (top, g) = gap(&-mt2.slack(&y));
                (top.abs() > MARGIN && g > MARGIN).then_some(y)
            }),
        },
    ]
}

pub fn smoothed_cases(seed: u64, mu: f64) -> Vec<OracleCase> {
    let h = (1e-4 * mu).min(1e-6);
    let any =
        |n: usize, scale: f64| -> Sampler { Box::new(move |rng| Some(normal_vec(rng, n, scale))) };
    let mt = matcomp_instance(seed);
    let nobs = mt.nobs();
    vec![
        OracleCase {
            name: format!("smoothed_vec_max(mu={mu:e})"),
            objective: Box::new(SmoothedVecMax::new(6, mu).unwrap()),
            h,
            sampler: any(6, 1.0),
        },
        OracleCase {
            name: format!("smoothed_les_houches(mu={mu:e})"),
            objective: Box::new(Smoothed::new(LesHouchesProblem::new(8).unwrap(), mu).unwrap()),
            h,
            sampler: any(8, 1.0),
        },
        OracleCase {
            name: format!("smoothed_max_eig(mu={mu:e})"),
            objective: Box::new(Smoothed::new(max_eig_instance(seed), mu).unwrap()),
            h,
            sampler: any(5, 1.0),
        },
        OracleCase {
            name: format!("smoothed_maxcut(mu={mu:e})"),
            objective: Box::new(Smoothed::new(maxcut_instance(seed), mu).unwrap()),
            h,
            sampler: any(8, 1.0),
        },
        OracleCase {
            name: format!("smoothed_matcomp(mu={mu:e})"),
            objective: Box::new(Smoothed::new(mt, mu).unwrap()),
            h,
            sampler: any(nobs, 3.0),
        },
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
