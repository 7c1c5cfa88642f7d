use rcw_core::gen::{fixture, gen_lps, gen_random_regular, LpsParams, RandomRegularParams};

use super::Ctx;
use crate::args::GenCommand;
use crate::error::{CliError, Result};
use crate::io::{emit, GraphFile, GraphSource};

pub fn run(ctx: &mut Ctx, which: GenCommand) -> Result<i32> {
    let (graph, source, output) = match which {
        GenCommand::Fixture { name, output } => (
            fixture(name),
            GraphSource::Fixture {
                name: name.name().into(),
            },
            output,
        ),
        GenCommand::Lps { p, q, output } => {
            let params = LpsParams::new(p, q).map_err(|e| CliError::Usage(e.to_string()))?;
            let g = gen_lps(params).map_err(CliError::compute)?;
            (g, GraphSource::Lps { p, q }, output)
        }
        GenCommand::Random { n, d, seed, output } => {
            ctx.manifest.seed(seed);
            let g = gen_random_regular(RandomRegularParams::new(n, d, seed))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            (g, GraphSource::Random { n, d, seed }, output)
        }
    };
    let file = GraphFile::from_graph(&graph, Some(source), Some(ctx.manifest.finish()));
    emit(output.as_deref(), &crate::json::to_string(&file))?;
    Ok(0)
}
