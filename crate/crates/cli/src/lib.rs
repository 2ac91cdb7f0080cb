//! Command-line front end and local session service for prooftree.
//!
//! [`service::Service`] holds a workspace of proofs and answers protocol
//! requests; [`http`] puts it behind `POST /api/<op>`.

pub mod config;
pub mod http;
pub mod outline;
pub mod protocol;
pub mod service;
