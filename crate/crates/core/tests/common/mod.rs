//! The worked example models shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use bist_core::kripke::{build_model, BuildOptions};
use bist_core::HModel;

pub fn val(pairs: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
    pairs
        .iter()
        .map(|(a, xs)| (a.to_string(), xs.iter().map(|s| s.to_string()).collect()))
        .collect()
}

fn model(
    universe: &[&str],
    h: &[(&str, &str)],
    r: &[(&str, &str)],
    p: &[&str],
) -> HModel {
    build_model(universe, h, r, &val(&[("p", p)]), BuildOptions::default()).unwrap()
}

/// `U = {0,1,2,3}`, `H` generated by `0H1`, `2H3`, `R = {(0,3),(1,3)}`, `V(p) = {1,2,3}`.
pub fn m1() -> HModel {
    model(&["0", "1", "2", "3"], &[("0", "1"), ("2", "3")], &[("0", "3"), ("1", "3")], &["1", "2", "3"])
}

/// `U = {a,b,c}`, `H` generated by `aHb`, `R = {(a,c),(b,c)}`, `V(p) = {b,c}`.
pub fn m2() -> HModel {
    model(&["a", "b", "c"], &[("a", "b")], &[("a", "c"), ("b", "c")], &["b", "c"])
}

pub fn n1() -> HModel {
    model(&["0", "1", "2", "3"], &[("1", "0"), ("3", "2")], &[("1", "2"), ("1", "3")], &["0", "1", "2"])
}

pub fn n2() -> HModel {
    model(&["a", "b", "c"], &[("c", "b")], &[("a", "b"), ("a", "c")], &["a", "b"])
}
