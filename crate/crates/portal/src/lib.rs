//! Nanopublication store and statement portal.
//!
//! [`Portal`] keeps nanopublications in memory, indexed by sentence, agent
//! and relation, and persists them in an append-only TriG journal. The
//! [`router`] exposes it as a JSON HTTP API.

mod http;
pub mod journal;
mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use aidapub_core::aida::{default_ruleset, RuleSet};

pub use http::{router, AgentRequest, AppState, ErrorBody, LinkRequest, OpinionRequest, ValidateRequest, TRIG_MEDIA_TYPE};
pub use store::{
    Agent, AgentKind, AssertingNanopub, Opinion, OpinionKind, Outcome, Portal, PortalError, Receipt, RelatedStatement,
    RelationKind, SearchHit, StatementView,
};

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub listen: SocketAddr,
    /// Without a journal the store lives only as long as the process.
    pub journal: Option<PathBuf>,
    pub rules: RuleSet,
}

impl Default for ServeConfig {
    fn default() -> Self {
        ServeConfig { listen: SocketAddr::from(([127, 0, 0, 1], 8080)), journal: None, rules: default_ruleset() }
    }
}

impl ServeConfig {
    pub fn open_state(&self) -> Result<AppState, PortalError> {
        let portal = match &self.journal {
            Some(path) => Portal::open(path)?,
            None => Portal::in_memory(),
        };
        Ok(AppState { portal: Arc::new(portal), rules: Arc::new(self.rules.clone()) })
    }
}

/// Serves the API on an already bound listener until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: AppState,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "portal listening");
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}
