#include <rgnn/app/model_io.hpp>

#include <rgnn/app/config.hpp>
#include <rgnn/bench/train.hpp>
#include <rgnn/core/error.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace rgnn::app {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, static_cast<std::size_t>(ptr - buf)};
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

std::vector<std::pair<std::string, std::string>> settings_manifest(const TrainedModel& m) {
    const auto& s = m.settings;
    return {
        {"kind", to_string(m.kind)},
        {"num_classes", std::to_string(m.num_classes)},
        {"embed_dim", std::to_string(m.embed_dim)},
        {"gcn_hidden", std::to_string(s.hp.gcn_hidden)},
        {"rnn_hidden", std::to_string(s.hp.rnn_hidden)},
        {"mlp_hidden", join_ints(s.hp.mlp_hidden)},
        {"max_posts", std::to_string(s.hp.max_posts)},
        {"max_commenters", std::to_string(s.hp.max_commenters)},
        {"lr", fmt_double(s.hp.lr)},
        {"batch_size", std::to_string(s.hp.batch_size)},
        {"epochs", std::to_string(s.hp.epochs)},
        {"seed", std::to_string(s.hp.seed)},
        {"linear_epochs", std::to_string(s.linear.epochs)},
        {"linear_lr", fmt_double(s.linear.lr)},
        {"linear_l2", fmt_double(s.linear.l2)},
        {"linear_batch_size", std::to_string(s.linear.batch_size)},
        {"linear_seed", std::to_string(s.linear.seed)},
        {"split_train", fmt_double(s.ratios.train)},
        {"split_validation", fmt_double(s.ratios.validation)},
        {"split_test", fmt_double(s.ratios.test)},
        {"split_seed", std::to_string(s.split_seed)},
    };
}

}  // namespace

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::rgnn: return "rgnn";
        case ModelKind::noreply: return "noreply";
        case ModelKind::traceminer: return "traceminer";
        case ModelKind::svm_author: return "svm-author";
        case ModelKind::svm_author_commenter: return "svm-author-commenter";
        case ModelKind::logit_author: return "logit-author";
        case ModelKind::logit_author_commenter: return "logit-author-commenter";
    }
    return "?";
}

const std::vector<ModelKind>& all_model_kinds() {
    static const std::vector<ModelKind> kinds{
        ModelKind::rgnn,       ModelKind::noreply,      ModelKind::traceminer,
        ModelKind::svm_author, ModelKind::svm_author_commenter, ModelKind::logit_author,
        ModelKind::logit_author_commenter};
    return kinds;
}

ModelKind model_kind_from_string(std::string_view name) {
    for (ModelKind k : all_model_kinds())
        if (name == to_string(k)) return k;
    throw ConfigError("unknown variant '" + std::string(name) + "'");
}

bool is_neural(ModelKind kind) {
    return kind == ModelKind::rgnn || kind == ModelKind::noreply || kind == ModelKind::traceminer;
}

model::Variant neural_variant(ModelKind kind) {
    switch (kind) {
        case ModelKind::rgnn: return model::Variant::rgnn;
        case ModelKind::noreply: return model::Variant::noreply;
        case ModelKind::traceminer: return model::Variant::traceminer;
        default: throw ConfigError(std::string(to_string(kind)) + " is not a neural variant");
    }
}

bench::FeatureMode feature_mode(ModelKind kind) {
    return kind == ModelKind::svm_author || kind == ModelKind::logit_author
               ? bench::FeatureMode::author
               : bench::FeatureMode::author_commenter;
}

bench::LinearLoss linear_loss(ModelKind kind) {
    return kind == ModelKind::svm_author || kind == ModelKind::svm_author_commenter
               ? bench::LinearLoss::hinge
               : bench::LinearLoss::logistic;
}

std::string TrainedModel::config_hash() const {
    std::string canon;
    for (const auto& [k, v] : settings_manifest(*this)) canon += k + "=" + v + "\n";
    return fnv1a_hex(canon);
}

TrainedModel train_model(ModelKind kind, const ingest::Dataset& dataset, const bench::Split& split,
                         const model::UserFeatureSource& features, const TrainSettings& settings) {
    TrainedModel m;
    m.kind = kind;
    m.num_classes = dataset.num_classes;
    m.embed_dim = features.dim();
    m.settings = settings;

    if (is_neural(kind)) {
        auto result = bench::train(dataset, split, neural_variant(kind), settings.hp, features);
        m.neural = std::move(result.params);
        m.train_loss = std::move(result.history.train_loss);
        m.val_micro_f1 = std::move(result.history.val_micro_f1);
        m.selected_epoch = result.history.selected_epoch;
        return m;
    }

    const std::span<const ingest::LinkSample> all(dataset.samples);
    const auto train = bench::gather(all, split.train);
    const auto val = bench::gather(all, split.validation);
    const auto x_train = bench::mean_embedding_matrix(train, features, feature_mode(kind));
    const auto x_val = bench::mean_embedding_matrix(val, features, feature_mode(kind));
    std::vector<int> y_train, y_val;
    for (const auto& s : train) y_train.push_back(s.label);
    for (const auto& s : val) y_val.push_back(s.label);

    bench::LinearConfig cfg = settings.linear;
    cfg.loss = linear_loss(kind);
    auto fit = bench::train_linear(x_train, y_train, dataset.num_classes, cfg, &x_val, y_val);
    m.linear = std::move(fit.model);
    m.train_loss = std::move(fit.epoch_loss);
    m.val_micro_f1 = std::move(fit.val_micro_f1);
    m.selected_epoch = fit.selected_epoch;
    return m;
}

std::vector<int> predict(const TrainedModel& m, std::span<const ingest::LinkSample> samples,
                         const model::UserFeatureSource& features) {
    if (features.dim() != m.embed_dim)
        throw DimensionError("embedding dimension " + std::to_string(features.dim()) +
                             " does not match model dimension " + std::to_string(m.embed_dim));
    if (is_neural(m.kind)) {
        const auto prepared = model::prepare_samples(samples, features, m.settings.hp, neural_variant(m.kind));
        return bench::predict_all(prepared, m.neural);
    }
    const auto x = bench::mean_embedding_matrix(samples, features, feature_mode(m.kind));
    std::vector<int> out;
    for (std::size_t i = 0; i < x.rows(); ++i) out.push_back(m.linear.predict(x.row(i)));
    return out;
}

bench::Metrics evaluate(const TrainedModel& m, const ingest::Dataset& dataset,
                        std::span<const std::size_t> indices, const model::UserFeatureSource& features) {
    const auto samples = bench::gather(std::span<const ingest::LinkSample>(dataset.samples), indices);
    const auto pred = predict(m, samples, features);
    std::vector<int> labels;
    for (const auto& s : samples) {
        if (s.label >= m.num_classes)
            throw DimensionError("label " + std::to_string(s.label) + " outside the model's " +
                                 std::to_string(m.num_classes) + " classes");
        labels.push_back(s.label);
    }
    return bench::compute_metrics(pred, labels, m.num_classes);
}

void save_model(const std::filesystem::path& path, const TrainedModel& m) {
    nn::ParamContainer c;
    if (is_neural(m.kind)) {
        c = model::to_container(m.neural);
        c.metadata.clear();
    } else {
        c.blocks.emplace_back("linear.w", m.linear.weights);
        c.blocks.emplace_back("linear.b", nn::Matrix::column(m.linear.bias));
    }
    c.metadata = settings_manifest(m);
    c.metadata.emplace_back("selected_epoch", std::to_string(m.selected_epoch));
    c.metadata.emplace_back("embeddings", m.embeddings);
    write_file(path, [&](std::ostream& out) { nn::write_params(out, c); }, true);
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    nn::ParamContainer c;
    try {
        c = nn::read_params(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
    auto need = [&](const char* key) -> const std::string& {
        const std::string* v = c.meta(key);
        if (!v) throw IntegrityError(path.string() + ": manifest lacks '" + key + "'");
        return *v;
    };
    TrainedModel m;
    try {
        m.kind = model_kind_from_string(need("kind"));
        m.num_classes = std::stoi(need("num_classes"));
        m.embed_dim = std::stoul(need("embed_dim"));
        auto& s = m.settings;
        s.hp.gcn_hidden = std::stoi(need("gcn_hidden"));
        s.hp.rnn_hidden = std::stoi(need("rnn_hidden"));
        s.hp.mlp_hidden = split_ints(need("mlp_hidden"));
        s.hp.max_posts = std::stoi(need("max_posts"));
        s.hp.max_commenters = std::stoi(need("max_commenters"));
        s.hp.lr = std::stod(need("lr"));
        s.hp.batch_size = std::stoi(need("batch_size"));
        s.hp.epochs = std::stoi(need("epochs"));
        s.hp.seed = std::stoull(need("seed"));
        s.linear.epochs = std::stoi(need("linear_epochs"));
        s.linear.lr = std::stod(need("linear_lr"));
        s.linear.l2 = std::stod(need("linear_l2"));
        s.linear.batch_size = std::stoul(need("linear_batch_size"));
        s.linear.seed = std::stoull(need("linear_seed"));
        s.ratios.train = std::stod(need("split_train"));
        s.ratios.validation = std::stod(need("split_validation"));
        s.ratios.test = std::stod(need("split_test"));
        s.split_seed = std::stoull(need("split_seed"));
        m.selected_epoch = std::stoi(need("selected_epoch"));
        m.embeddings = need("embeddings");
    } catch (const std::invalid_argument&) {
        throw IntegrityError(path.string() + ": malformed manifest value");
    } catch (const std::out_of_range&) {
        throw IntegrityError(path.string() + ": manifest value out of range");
    }

    if (is_neural(m.kind)) {
        m.neural = model::from_container(c, neural_variant(m.kind));
        if (m.neural.input_dim() != m.embed_dim || m.neural.num_classes() != static_cast<std::size_t>(m.num_classes))
            throw DimensionError(path.string() + ": parameter shapes disagree with manifest");
    } else {
        const nn::Matrix* w = c.block("linear.w");
        const nn::Matrix* b = c.block("linear.b");
        if (!w || !b) throw IntegrityError(path.string() + ": missing linear blocks");
        if (w->rows() != static_cast<std::size_t>(m.num_classes) || w->cols() != m.embed_dim ||
            b->rows() != w->rows())
            throw DimensionError(path.string() + ": parameter shapes disagree with manifest");
        m.linear.weights = *w;
        m.linear.bias.assign(b->data().begin(), b->data().end());
    }
    return m;
}

nlohmann::ordered_json history_json(const TrainedModel& m) {
    nlohmann::ordered_json j;
    j["variant"] = to_string(m.kind);
    j["train_loss"] = m.train_loss;
    j["val_micro_f1"] = m.val_micro_f1;
    j["selected_epoch"] = m.selected_epoch;
    return j;
}

nlohmann::ordered_json metrics_report(const bench::Metrics& metrics, const TrainedModel& m) {
    nlohmann::ordered_json j;
    j["variant"] = to_string(m.kind);
    j["seed"] = is_neural(m.kind) ? m.settings.hp.seed : m.settings.linear.seed;
    j["split_seed"] = m.settings.split_seed;
    j["config_hash"] = m.config_hash();
    j["num_classes"] = m.num_classes;
    const auto body = bench::to_json(metrics);
    for (auto& [k, v] : body.items()) j[k] = v;
    return j;
}

}  // namespace rgnn::app
