//! One-off calibration helper for the model-vs-exact error budget; run with
//! `cargo test --test calibration -- --ignored --nocapture` to re-derive the
//! constant frozen in the acceptance suite.

use clusterlab_core::dist::{
    exact_distribution, is_good, model_log_prob, model_distribution, tv_distance, default_omega,
    LambdaVariant, PredicateConfig,
};
use clusterlab_core::cliques::hypergraph_of_mask;
use clusterlab_core::moments::moment_table;
use clusterlab_core::scalar::Scalar;
use clusterlab_core::Rational;

#[test]
#[ignore]
fn calibrate_model_error_constant() {
    let (n, r) = (6usize, 3usize);
    let omega = default_omega(n);
    for p_tenths in [1i64, 2, 3] {
        let p = Rational::new(p_tenths.into(), 10.into());
        let table = moment_table(n, r, &p).unwrap();
        let law = exact_distribution(n, r, &p).unwrap();
        let cfg = PredicateConfig::exact(&table, &law, omega, 1.0, 0.2).unwrap();
        let bracket = omega * table.xi + table.delta2.to_f64() / table.mu.to_f64().sqrt()
            + table.pi.to_f64().powi(2) * table.n_members as f64;
        let mut worst: f64 = 0.0;
        let mut good_count = 0usize;
        for (&key, prob) in law.iter() {
            let pf = prob.to_f64();
            if pf <= 1e-12 {
                continue;
            }
            let h = hypergraph_of_mask(n, r, key);
            if !is_good(&h, &cfg).pass {
                continue;
            }
            good_count += 1;
            let err = (pf.ln() - model_log_prob(&h, &table, LambdaVariant::Full)).abs();
            worst = worst.max(err / bracket);
        }
        let model = model_distribution(&law, &table, LambdaVariant::Full);
        let tv = tv_distance(&law.to_f64(), &model).unwrap();
        println!(
            "p = {p_tenths}/10: bracket = {bracket:.6}, good H = {good_count}, worst err/bracket = {worst:.6}, TV = {tv:.6}"
        );
    }
}
