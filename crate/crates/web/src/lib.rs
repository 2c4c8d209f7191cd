//! Browser bindings. Every function returns flat `Float64Array`s so the page
//! needs no glue beyond the generated module.

use wasm_bindgen::prelude::*;

use lampwalk::constructions::plateau_experiment;
use lampwalk::coupling::{tail_exact, tail_profile, CouplingConfig};
use lampwalk::group::FiniteGroupTable;
use lampwalk::harmonic::symz_h;
use lampwalk::presets;
use lampwalk::walk::{big_to_f64, Prob};

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Coupling tail on the lamplighter preset at `n = 4, 8, ..., 2^max_log`.
/// Rows of `[n, p_hat, stderr, exact]`.
#[wasm_bindgen]
pub fn coupling_tail(trials: usize, seed: u32, max_log: u32) -> Result<Vec<f64>, JsValue> {
    if !(2..=14).contains(&max_log) || trials == 0 {
        return Err(js_err("need 2 <= max_log <= 14 and trials > 0"));
    }
    let w = presets::ll_z2();
    let cfg = CouplingConfig::build(&presets::ll_z2_step(), 2, presets::ll_z2_f(), w.lamp_at(0, 1), 0, true, 10_000)
        .map_err(js_err)?;
    let ns: Vec<usize> = (2..=max_log).map(|k| 1usize << k).collect();
    let pts = tail_profile(&cfg, &ns, trials, u64::from(seed)).map_err(js_err)?;
    let exact = tail_exact(&cfg, &ns);
    Ok(pts
        .iter()
        .zip(exact)
        .flat_map(|(p, e)| [p.n as f64, p.p_hat, p.stderr, e])
        .collect())
}

/// Exact total variation between `n` and `n + ⌈δn⌉` steps of the lazy
/// lamplighter walk with lamps `Z/q`, `δ = 1/4`. Rows of `[n, m, tv]`.
#[wasm_bindgen]
pub fn plateau_series(q: usize, n_max: usize) -> Result<Vec<f64>, JsValue> {
    if !(2..=4).contains(&q) || n_max > 16 {
        return Err(js_err("need 2 <= q <= 4 and n_max <= 16"));
    }
    let r = plateau_experiment(&FiniteGroupTable::cyclic(q), Prob::new(1, 4), n_max, 4_000_000).map_err(js_err)?;
    Ok(r.rows.iter().flat_map(|row| [row.n as f64, row.m as f64, big_to_f64(&row.tv)]).collect())
}

/// The harmonic function on the Sym(Z)⋊Z Schreier graph at `-radius..=radius`.
#[wasm_bindgen]
pub fn symz_profile(radius: i32) -> Vec<f64> {
    let r = i64::from(radius.clamp(1, 10_000));
    (-r..=r).map(|x| big_to_f64(&symz_h(x))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let t = coupling_tail(200, 3, 4).unwrap();
        assert_eq!(t.len(), 3 * 4);
        assert!(t.chunks(4).all(|r| (0.0..=1.0).contains(&r[1])));
        let p = plateau_series(2, 6).unwrap();
        assert_eq!(p.len(), 7 * 3);
        assert_eq!(p[2], 0.0);
        let h = symz_profile(5);
        assert_eq!(h.len(), 11);
        assert_eq!(h[5], 0.0);
    }
}
