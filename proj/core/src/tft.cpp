#include "tempocast/tft.hpp"

#include <cmath>

#include "tempocast/error.hpp"
#include "tempocast/loss.hpp"

namespace tempocast {

void TftConfig::validate() const {
    if (input_len < 1 || output_len < 1) throw ConfigError("tft: chunk lengths must be positive");
    if (hidden_size < 1) throw ConfigError("tft: hidden size must be positive");
    if (lstm_layers < 1) throw ConfigError("tft: lstm_layers must be positive");
    if (attention_heads < 1 || hidden_size % attention_heads != 0)
        throw ConfigError("tft: hidden size " + std::to_string(hidden_size) +
                          " must be divisible by attention heads " + std::to_string(attention_heads));
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("tft: dropout must lie in [0,1)");
    if (covariates < 1) throw ConfigError("tft: needs at least one covariate channel");
    if (quantiles.empty()) throw ConfigError("tft: quantile list is empty");
    bool has_median = false;
    for (std::size_t i = 0; i < quantiles.size(); ++i) {
        const double q = quantiles[i];
        if (q <= 0.0 || q >= 1.0) throw ConfigError("tft: quantiles must lie strictly inside (0,1)");
        if (i > 0 && quantiles[i - 1] >= q) throw ConfigError("tft: quantiles must strictly increase");
        if (q == 0.5) has_median = true;
    }
    if (!has_median) throw ConfigError("tft: quantile list must include 0.5");
}

int TftConfig::median_index() const {
    for (std::size_t i = 0; i < quantiles.size(); ++i)
        if (quantiles[i] == 0.5) return static_cast<int>(i);
    throw ConfigError("tft: quantile list must include 0.5");
}

TftModel::TftModel(TftConfig cfg, std::uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng = Rng(seed).derive("tft-init");
    const int d = cfg_.hidden_size;
    const int c = cfg_.covariates;
    const int nq = static_cast<int>(cfg_.quantiles.size());

    var_embed_.push_back(Dense::create(params_, "embed.target", 1, d, rng));
    for (int j = 0; j < c; ++j)
        var_embed_.push_back(Dense::create(params_, "embed.cov" + std::to_string(j), 1, d, rng));
    static_embedding_ =
        params_.add("static.embedding", {1, d}, glorot_uniform(rng, 1, d, static_cast<std::size_t>(d)));

    static_sel_ = Grn::create(params_, "static.sel", d, d, d, 0, cfg_.dropout, rng);
    static_cell_ = Grn::create(params_, "static.cell", d, d, d, 0, cfg_.dropout, rng);
    static_hidden_ = Grn::create(params_, "static.hidden", d, d, d, 0, cfg_.dropout, rng);
    static_enrich_ctx_ = Grn::create(params_, "static.enrich", d, d, d, 0, cfg_.dropout, rng);

    vsn_past_ = Vsn::create(params_, "vsn.past", 1 + c, d, d, cfg_.dropout, rng);
    vsn_future_ = Vsn::create(params_, "vsn.future", c, d, d, cfg_.dropout, rng);

    encoder_ = LstmStack::create(params_, "encoder", d, d, cfg_.lstm_layers, rng);
    decoder_ = LstmStack::create(params_, "decoder", d, d, cfg_.lstm_layers, rng);
    lstm_gate_ = Glu::create(params_, "lstm_gate", d, d, rng);
    lstm_norm_ = LayerNormParams::create(params_, "lstm_norm", d);

    enrichment_ = Grn::create(params_, "enrichment", d, d, d, d, cfg_.dropout, rng);
    attention_ = Mha::create(params_, "attention", d, cfg_.attention_heads, rng);
    attn_gate_ = Glu::create(params_, "attn_gate", d, d, rng);
    attn_norm_ = LayerNormParams::create(params_, "attn_norm", d);
    positionwise_ = Grn::create(params_, "positionwise", d, d, d, 0, cfg_.dropout, rng);
    head_ = Dense::create(params_, "head", d, nq, rng);
}

TftModel::ForwardOut TftModel::forward(const WindowBatch& batch, bool training, Rng& rng,
                                       bool want_trace) const {
    const int B = batch.batch, k = cfg_.input_len, n = cfg_.output_len, c = cfg_.covariates;
    if (batch.k != k || batch.n != n || batch.c != c)
        throw ShapeError("tft: batch windows (k=" + std::to_string(batch.k) + ", n=" + std::to_string(batch.n) +
                         ", c=" + std::to_string(batch.c) + ") do not match config (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ", c=" + std::to_string(c) + ")");
    const int d = cfg_.hidden_size;
    const int L = k + n;

    // per-variable scalar channels -> d-dim embeddings
    Tensor past_flat = Tensor::from_values({B * k, 1 + c}, batch.past);
    Tensor fut_flat = Tensor::from_values({B * n, c}, batch.future_cov);
    std::vector<Tensor> past_vars, fut_vars;
    past_vars.reserve(1 + c);
    fut_vars.reserve(c);
    for (int v = 0; v < 1 + c; ++v) past_vars.push_back(var_embed_[v](slice(past_flat, 1, v, 1)));
    for (int j = 0; j < c; ++j) fut_vars.push_back(var_embed_[1 + j](slice(fut_flat, 1, j, 1)));

    // static covariate encoders: one learned series embedding -> four contexts
    Tensor stat = repeat_rows(static_embedding_, B);
    Tensor ctx_sel = static_sel_.forward(stat, nullptr, training, rng);
    Tensor ctx_cell = static_cell_.forward(stat, nullptr, training, rng);
    Tensor ctx_hidden = static_hidden_.forward(stat, nullptr, training, rng);
    Tensor ctx_enrich = static_enrich_ctx_.forward(stat, nullptr, training, rng);

    // per-timestep variable selection (time folded into the row dimension)
    Tensor ctx_sel_past = repeat_rows(ctx_sel, k);
    Tensor ctx_sel_fut = repeat_rows(ctx_sel, n);
    Vsn::Result sel_past = vsn_past_.forward(past_vars, &ctx_sel_past, training, rng);
    Vsn::Result sel_fut = vsn_future_.forward(fut_vars, &ctx_sel_fut, training, rng);

    // sequence-to-sequence local processing, states seeded by the static contexts
    LstmState init;
    for (int l = 0; l < cfg_.lstm_layers; ++l) {
        init.h.push_back(ctx_hidden);
        init.c.push_back(ctx_cell);
    }
    auto [enc_seq, enc_final] =
        encoder_.forward(reshape(sel_past.combined, {B, k, d}), init, 0.0, training, rng);
    auto [dec_seq, dec_final] =
        decoder_.forward(reshape(sel_fut.combined, {B, n, d}), enc_final, 0.0, training, rng);
    (void)dec_final;

    // gated skip around the LSTM block, back onto the selection outputs
    Tensor seq = reshape(concat({enc_seq, dec_seq}, 1), {B * L, d});
    Tensor sel_seq = concat({reshape(sel_past.combined, {B, k, d}), reshape(sel_fut.combined, {B, n, d})}, 1);
    Tensor temporal = lstm_norm_(
        add(lstm_gate_(dropout(seq, cfg_.dropout, training, rng)), reshape(sel_seq, {B * L, d})));

    // static enrichment, then causal interpretable attention over all k+n steps
    Tensor ctx_enrich_seq = repeat_rows(ctx_enrich, L);
    Tensor enriched = enrichment_.forward(temporal, &ctx_enrich_seq, training, rng);
    Tensor enriched_seq = reshape(enriched, {B, L, d});
    AttnMask mask = AttnMask::causal(L);
    Mha::Result attn = attention_.self_attention(enriched_seq, mask);

    Tensor attn_gated = attn_norm_(
        add(attn_gate_(dropout(reshape(attn.output, {B * L, d}), cfg_.dropout, training, rng)), enriched));
    Tensor final_seq = positionwise_.forward(attn_gated, nullptr, training, rng);

    // quantile head over the future positions only
    Tensor future_slice = slice(reshape(final_seq, {B, L, d}), 1, k, n);
    const int nq = static_cast<int>(cfg_.quantiles.size());
    Tensor out = reshape(head_(reshape(future_slice, {B * n, d})), {B, n, nq});

    ForwardOut fwd;
    fwd.quantile_out = out;
    if (want_trace) {
        auto trace = std::make_shared<AttentionTrace>();
        trace->heads = cfg_.attention_heads;
        trace->seq_len = L;
        trace->past_len = k;
        trace->future_len = n;
        for (const Tensor& w : attn.head_weights) {
            const auto& wv = w.values();  // [B, L, L]; keep batch item 0
            std::vector<double> m(wv.begin(), wv.begin() + static_cast<std::ptrdiff_t>(L) * L);
            for (int r = 0; r < L; ++r)
                for (int col = r + 1; col < L; ++col)
                    if (m[static_cast<std::size_t>(r) * L + col] != 0.0)
                        throw Error("tft: causal mask violated in attention trace at (" +
                                    std::to_string(r) + "," + std::to_string(col) + ")");
            trace->attention.push_back(std::move(m));
        }
        const auto& wp = sel_past.weights.values();  // [B*k, 1+c], batch-major rows first
        for (int s = 0; s < k; ++s)
            trace->sel_past.emplace_back(wp.begin() + static_cast<std::ptrdiff_t>(s) * (1 + c),
                                         wp.begin() + static_cast<std::ptrdiff_t>(s + 1) * (1 + c));
        const auto& wf = sel_fut.weights.values();  // [B*n, c]
        for (int s = 0; s < n; ++s)
            trace->sel_future.emplace_back(wf.begin() + static_cast<std::ptrdiff_t>(s) * c,
                                           wf.begin() + static_cast<std::ptrdiff_t>(s + 1) * c);
        fwd.trace = std::move(trace);
    }
    return fwd;
}

Tensor TftModel::training_loss(const WindowBatch& batch, bool training, Rng& dropout_rng) {
    ForwardOut out = forward(batch, training, dropout_rng, false);
    Tensor target = Tensor::from_values({batch.batch, cfg_.output_len}, batch.targets);
    if (cfg_.mse_mode) {
        Tensor median = reshape(slice(reshape(out.quantile_out, {batch.batch * cfg_.output_len,
                                                                 static_cast<int>(cfg_.quantiles.size())}),
                                      1, cfg_.median_index(), 1),
                                {batch.batch, cfg_.output_len});
        return mse_loss(median, target);
    }
    return quantile_loss(out.quantile_out, target, cfg_.quantiles);
}

ChunkForecast TftModel::predict_chunk(const WindowBatch& window) const {
    if (window.batch != 1) throw ContractError("predict_chunk expects a single window");
    Rng dummy(0);
    ForwardOut out = forward(window, /*training=*/false, dummy, /*want_trace=*/true);
    const int n = cfg_.output_len;
    const int nq = static_cast<int>(cfg_.quantiles.size());
    ChunkForecast cf;
    cf.quantile_levels = cfg_.quantiles;
    cf.quantiles.assign(static_cast<std::size_t>(nq), std::vector<double>(static_cast<std::size_t>(n)));
    const auto& v = out.quantile_out.values();
    for (int s = 0; s < n; ++s)
        for (int q = 0; q < nq; ++q) cf.quantiles[static_cast<std::size_t>(q)][static_cast<std::size_t>(s)] =
            v[static_cast<std::size_t>(s) * nq + q];
    cf.point = cf.quantiles[static_cast<std::size_t>(cfg_.median_index())];
    cf.trace = out.trace;
    return cf;
}

}  // namespace tempocast
