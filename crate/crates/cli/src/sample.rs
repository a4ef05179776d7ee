//! The `sample` subcommand: fan prompts out to a chat API.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use sorites_core::records::{read_jsonl, write_jsonl, PromptRow, TransportStatus};
use sorites_gateway::{sample, GatewayConfig};

#[derive(Args)]
pub struct SampleArgs {
    /// Prompt rows produced by `generate`.
    #[arg(long)]
    prompts: PathBuf,
    /// Full chat-completions URL.
    #[arg(long)]
    endpoint: String,
    #[arg(long)]
    model: String,
    /// Environment variable holding the bearer token; no Authorization
    /// header is sent when it is unset.
    #[arg(long, default_value = "OPENAI_API_KEY")]
    api_key_env: String,
    #[arg(long, default_value_t = 0.3)]
    temperature: f64,
    /// Responses to draw per prompt.
    #[arg(long, default_value_t = 4)]
    samples: u32,
    #[arg(long, default_value_t = 2048)]
    max_tokens: u32,
    #[arg(long, default_value_t = 120)]
    timeout_secs: u64,
    /// Additional attempts after a failed request.
    #[arg(long, default_value_t = 3)]
    max_retries: u32,
    /// Maximum in-flight requests.
    #[arg(long, default_value_t = 8)]
    concurrency: usize,
    /// Output path for response records.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: SampleArgs) -> Result<()> {
    let prompts: Vec<PromptRow> = read_jsonl(&args.prompts)
        .with_context(|| format!("reading prompts from {}", args.prompts.display()))?;
    let cfg = GatewayConfig {
        endpoint: args.endpoint,
        model: args.model,
        api_key_env: args.api_key_env,
        temperature: args.temperature,
        samples_per_prompt: args.samples,
        max_tokens: args.max_tokens,
        timeout_secs: args.timeout_secs,
        max_retries: args.max_retries,
        concurrency: args.concurrency,
    };
    let records = sample(&prompts, &cfg).context("sampling responses")?;
    let failed =
        records.iter().filter(|r| r.transport_status == TransportStatus::Failed).count();
    write_jsonl(&args.out, &records)
        .with_context(|| format!("writing responses to {}", args.out.display()))?;
    println!(
        "wrote {} responses to {} ({failed} transport failures)",
        records.len(),
        args.out.display()
    );
    Ok(())
}
