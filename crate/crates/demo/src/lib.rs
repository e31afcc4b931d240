//! Browser bindings for the polygon and cone demos.
//!
//! Every entry point takes the text file format and returns a JSON string.
//! Coordinates come back both exact (`"3/2"`) and as `f64` for drawing.

use num_traits::ToPrimitive;
use polycone::cone::{convert, ConversionOptions, RecursionStats, TraceNode};
use polycone::format::{self, ProblemFile};
use polycone::linalg::RatVector;
use polycone::polyhedron::{h_to_v, v_to_h, HPolyhedron, VPolyhedron};
use polycone::verify::{verify_conversion, VerifyOptions};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
pub struct Coords {
    pub exact: Vec<String>,
    pub approx: Vec<f64>,
}

impl From<&RatVector> for Coords {
    fn from(v: &RatVector) -> Self {
        Self {
            exact: v.iter().map(|e| e.to_string()).collect(),
            approx: v.iter().map(|e| e.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct Polygon {
    pub points: Vec<Coords>,
    pub rays: Vec<Coords>,
    /// Rows `(a_1, a_2, b)` meaning `a·x ≤ b`.
    pub inequalities: Vec<Coords>,
    /// The converted description in the text format.
    pub text: String,
}

#[derive(Serialize)]
pub struct ConeTrace {
    pub dim: usize,
    pub generators: Vec<Coords>,
    pub verified: bool,
    pub stats: RecursionStats,
    pub trace: TraceNode,
    pub text: String,
}

fn parse(text: &str) -> Result<ProblemFile, String> {
    format::parse(text).map_err(|e| e.to_string())
}

fn planar(dim: usize) -> Result<(), String> {
    if dim == 2 {
        Ok(())
    } else {
        Err(format!("the polygon view needs dimension 2, got {dim}"))
    }
}

fn polygon(p: &HPolyhedron, q: &VPolyhedron, text: String) -> Polygon {
    let inequalities = p
        .matrix()
        .row_vectors()
        .zip(p.rhs().iter())
        .map(|(mut a, b)| {
            a.push(b.clone());
            Coords::from(&a)
        })
        .collect();
    Polygon {
        points: q.points().map(Coords::from).collect(),
        rays: q.rays().map(Coords::from).collect(),
        inequalities,
        text,
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

/// H-rep text of a planar polyhedron to its points and rays.
pub fn h_to_v_json(text: &str) -> Result<String, String> {
    let ProblemFile::HPolyhedron(p) = parse(text)? else {
        return Err("expected an `H-rep m 2` file".into());
    };
    planar(p.dim())?;
    let q = h_to_v(&p);
    let out = format::write_problem(&ProblemFile::VPolyhedron(q.clone()));
    to_json(&polygon(&p, &q, out))
}

/// V-rep text of a planar polyhedron to inequalities.
pub fn v_to_h_json(text: &str) -> Result<String, String> {
    let ProblemFile::VPolyhedron(q) = parse(text)? else {
        return Err("expected a `V-rep 2 |V| |W|` file".into());
    };
    planar(q.dim())?;
    let p = v_to_h(&q).map_err(|e| e.to_string())?;
    let out = format::write_problem(&ProblemFile::HPolyhedron(p.clone()));
    to_json(&polygon(&p, &q, out))
}

/// H-cone text to generators, certificate verdict and recursion tree.
pub fn cone_trace_json(text: &str) -> Result<String, String> {
    let ProblemFile::HCone(cone) = parse(text)? else {
        return Err("expected an `H-cone n p q` file".into());
    };
    let conversion = convert(&cone, ConversionOptions::default());
    let cert = verify_conversion(&cone, &conversion.generators, &VerifyOptions::default());
    to_json(&ConeTrace {
        dim: cone.dim(),
        generators: conversion.generators.iter().map(Coords::from).collect(),
        verified: cert.passed() && cert.reverse_ok(),
        stats: conversion.stats(),
        text: format::write_generators(&conversion.generators),
        trace: conversion.trace,
    })
}

#[wasm_bindgen]
pub fn polygon_h_to_v(text: &str) -> Result<String, String> {
    h_to_v_json(text)
}

#[wasm_bindgen]
pub fn polygon_v_to_h(text: &str) -> Result<String, String> {
    v_to_h_json(text)
}

#[wasm_bindgen]
pub fn cone_trace(text: &str) -> Result<String, String> {
    cone_trace_json(text)
}
