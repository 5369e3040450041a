//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each operation has a plain Rust function returning a JSON string and a
//! thin `wasm_bindgen` wrapper, so the logic is testable off the browser.

use pileshuffle::multiround::{embed_hetero_rounds, minimal_multiround_sort, MultiRoundPlan, RoundTypes};
use pileshuffle::shuffle::format_types;
use pileshuffle::stats::{format_rational, normal_approx_probability, rational_to_f64, sortable_probability_exact};
use pileshuffle::{
    apply_shuffle, dealer_choice_minimal_sort, minimal_queue_sort, minimal_sort_on_types, minimal_stack_sort,
    render_tableau, Convention, PileType, Permutation, TypeSchedule,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest deck the probability curve is drawn for.
pub const MAX_CURVE_N: usize = 400;

fn parse_deck(deck: &str, embedding: bool) -> Result<Permutation, String> {
    let convention = if embedding { Convention::Embedding } else { Convention::Sequence };
    Permutation::parse(deck, convention).map_err(|e| e.to_string())
}

fn stats(p: &Permutation) -> Value {
    json!({
        "n": p.len(),
        "descents": p.descents(),
        "ascending_runs": p.ascending_runs(),
        "descending_runs": p.descending_runs(),
    })
}

/// Minimal single-round sort of a deck. `mode` is `queues`, `stacks`,
/// `dealer`, or a type string such as `QSQ`.
pub fn sort_json(deck: &str, mode: &str, embedding: bool) -> Result<String, String> {
    let p = parse_deck(deck, embedding)?;
    let plan = match mode {
        "queues" => minimal_queue_sort(&p),
        "stacks" => minimal_stack_sort(&p),
        "dealer" => dealer_choice_minimal_sort(&p),
        types => {
            let x: TypeSchedule = types.parse().map_err(|e: pileshuffle::Error| e.to_string())?;
            match minimal_sort_on_types(&p, &x) {
                Ok(plan) => plan,
                Err(e) => {
                    return Ok(json!({
                        "status": "infeasible",
                        "message": e.to_string(),
                        "label": e.label,
                        "stats": stats(&p),
                    })
                    .to_string())
                }
            }
        }
    };
    let tableau = render_tableau(&p, &plan.assignment, &plan.schedule()).map_err(|e| e.to_string())?;
    Ok(json!({
        "status": "sorted",
        "plan": plan,
        "tableau": tableau,
        "text": tableau.render_text(),
        "stats": stats(&p),
    })
    .to_string())
}

/// Exact and normal-approximation probabilities that `m` queues sort a
/// random deck of `n`, for every `m` in `1..=n`.
pub fn curve_json(n: usize) -> Result<String, String> {
    if n == 0 || n > MAX_CURVE_N {
        return Err(format!("n must be between 1 and {MAX_CURVE_N}"));
    }
    let points: Vec<Value> = (1..=n)
        .map(|m| {
            let exact = sortable_probability_exact(n, m, PileType::Queue).expect("m is positive");
            json!({
                "m": m,
                "exact": format_rational(&exact),
                "float": rational_to_f64(&exact),
                "normal": normal_approx_probability(n, m),
            })
        })
        .collect();
    Ok(json!({ "n": n, "points": points }).to_string())
}

fn round_decks(plan: &MultiRoundPlan, p: &Permutation) -> Result<Vec<Value>, String> {
    let mut deck = p.clone();
    let mut out = Vec::new();
    for (x, h) in plan.single_rounds() {
        let tableau = render_tableau(&deck, &h, &x).map_err(|e| e.to_string())?;
        deck = apply_shuffle(&x, &h, &deck).map_err(|e| e.to_string())?;
        out.push(json!({
            "types": x.to_string(),
            "text": tableau.render_text(),
            "deck": deck.sequence(),
        }));
    }
    Ok(out)
}

/// Multi-round sort on fixed round types such as `QS,SQ`, with the
/// equivalent virtual piles and every round's deal.
pub fn multiround_json(deck: &str, rounds: &str, embedding: bool) -> Result<String, String> {
    let p = parse_deck(deck, embedding)?;
    let rt = RoundTypes::parse(rounds).map_err(|e| e.to_string())?;
    let limit = rt.saturating_product(p.len().max(1));
    let virtual_types = format_types(&pileshuffle::multiround::virtual_type_schedule(&rt, limit));
    let plan = match minimal_multiround_sort(&p, &rt) {
        Ok(plan) => plan,
        Err(e) => {
            return Ok(json!({
                "status": "infeasible",
                "message": e.to_string(),
                "virtual_types": virtual_types,
            })
            .to_string())
        }
    };
    let virt = embed_hetero_rounds(&plan).map_err(|e| e.to_string())?;
    Ok(json!({
        "status": "sorted",
        "plan": plan,
        "virtual_types": virtual_types,
        "virtual_assignment": virt.assignment.digits().iter().map(|d| d + 1).collect::<Vec<_>>(),
        "rounds": round_decks(&plan, &p)?,
    })
    .to_string())
}

#[wasm_bindgen(js_name = sortDeck)]
pub fn sort_deck(deck: &str, mode: &str, embedding: bool) -> Result<String, JsValue> {
    sort_json(deck, mode, embedding).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = probabilityCurve)]
pub fn probability_curve(n: usize) -> Result<String, JsValue> {
    curve_json(n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = multiRoundSort)]
pub fn multi_round_sort(deck: &str, rounds: &str, embedding: bool) -> Result<String, JsValue> {
    multiround_json(deck, rounds, embedding).map_err(|e| JsValue::from_str(&e))
}
