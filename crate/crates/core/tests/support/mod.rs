#![allow(dead_code)]

pub mod docs;
pub mod layers;
pub mod links;
pub mod rdf;
pub mod rdql;
