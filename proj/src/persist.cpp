#include "secpatch/persist.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "secpatch/errors.hpp"

namespace secpatch {

namespace {

constexpr char kMagic[4] = {'P', 'C', 'H', '1'};

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t n = 0; n < 256; ++n) {
        std::uint32_t crc = n;
        for (int bit = 0; bit < 8; ++bit)
            crc = (crc & 1) ? 0xEDB88320u ^ (crc >> 1) : crc >> 1;
        table[n] = crc;
    }
    return table;
}

}  // namespace

std::uint32_t crc32(std::string_view bytes) {
    static const std::array<std::uint32_t, 256> table = make_crc_table();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (unsigned char byte : bytes)
        crc = table[(crc ^ byte) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

std::string format_double(double value) {
    if (!std::isfinite(value))
        throw FormatError("cannot serialize a non-finite number");
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                   std::chars_format::general, 17);
    if (ec != std::errc())
        throw FormatError("failed to render a number");
    return std::string(buf, end);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value))
        throw FormatError("invalid numeric string \"" + text + "\"");
    return value;
}

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back(format_double(v[i]));
    return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
    if (!arr.is_array())
        throw FormatError("expected a JSON array of numeric strings");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = parse_double(arr[i].get<std::string>());
    return v;
}

struct Validator {
    const ModelBundle& bundle;

    void require(bool ok, const std::string& what) const {
        if (!ok)
            throw FormatError("model bundle invalid: " + what);
    }

    void run() const {
        // Vocabulary: indices are a bijection onto 0..V-1 in term order,
        // and every kept term has a positive document frequency.
        int expected = 0;
        for (const auto& [term, index] : bundle.vocabulary.term_to_index) {
            require(index == expected, "vocabulary index for \"" + term + "\" out of order");
            auto df = bundle.vocabulary.document_frequency.find(term);
            require(df != bundle.vocabulary.document_frequency.end() && df->second >= 1,
                    "vocabulary term \"" + term + "\" lacks a document frequency");
            ++expected;
        }

        // Schema names must be exactly what the token list generates.
        require(bundle.schema == make_schema(bundle.schema.sensitive_tokens),
                "feature schema names disagree with its token list");

        const Eigen::Index features = bundle.schema.feature_count();
        require(bundle.scaler.mean.size() == features, "scaler mean length mismatch");
        require(bundle.scaler.std_dev.size() == features, "scaler std length mismatch");
        require((bundle.scaler.std_dev.array() > 0.0).all(), "scaler std must be positive");
        require(bundle.scaler.mean.allFinite() && bundle.scaler.std_dev.allFinite(),
                "scaler holds non-finite values");

        require(bundle.nb.alpha > 0.0, "naive bayes alpha must be positive");
        require(bundle.nb.vocab_size == bundle.vocabulary.size(),
                "naive bayes vocabulary size disagrees with the vocabulary");
        require(bundle.nb.log_likelihood.rows() == 2 &&
                    bundle.nb.log_likelihood.cols() == bundle.nb.vocab_size,
                "naive bayes likelihood table has the wrong shape");
        require(bundle.nb.log_prior.allFinite() && bundle.nb.log_likelihood.allFinite(),
                "naive bayes holds non-finite values");
        require(std::abs(bundle.nb.log_prior.array().exp().sum() - 1.0) <= 1e-9,
                "naive bayes priors do not sum to 1");
        for (int c = 0; c < 2; ++c)
            require(std::abs(bundle.nb.log_likelihood.row(c).array().exp().sum() - 1.0) <= 1e-9,
                    "naive bayes likelihoods do not sum to 1 for class " + std::to_string(c));

        require(bundle.lr.weights.size() == features, "logistic weight length mismatch");
        require(bundle.lr.weights.allFinite() && std::isfinite(bundle.lr.bias),
                "logistic model holds non-finite values");
        require(bundle.lr.lambda >= 0.0, "logistic lambda must be nonnegative");

        require(bundle.config.iterations >= 1 && bundle.config.pool_size >= 0 &&
                    bundle.config.add_positive >= 0 && bundle.config.add_negative >= 0 &&
                    bundle.config.add_positive + bundle.config.add_negative >= 1 &&
                    bundle.config.min_confidence >= 0.5 && bundle.config.min_confidence <= 1.0,
                "co-training configuration out of range");

        require(bundle.train_log_digest.empty() ||
                    (bundle.train_log_digest.size() == 8 &&
                     bundle.train_log_digest.find_first_not_of("0123456789abcdef") ==
                         std::string::npos),
                "train log digest must be 8 lowercase hex digits or empty");
    }
};

}  // namespace

std::string bundle_to_json(const ModelBundle& bundle) {
    nlohmann::json doc;
    doc["format_version"] = bundle.format_version;

    nlohmann::json term_to_index = nlohmann::json::object();
    for (const auto& [term, index] : bundle.vocabulary.term_to_index)
        term_to_index[term] = index;
    nlohmann::json document_frequency = nlohmann::json::object();
    for (const auto& [term, df] : bundle.vocabulary.document_frequency)
        document_frequency[term] = df;
    doc["vocabulary"] = {{"term_to_index", std::move(term_to_index)},
                         {"document_frequency", std::move(document_frequency)}};

    doc["schema"] = {{"version", bundle.schema.version},
                     {"names", bundle.schema.names},
                     {"sensitive_tokens", bundle.schema.sensitive_tokens}};

    doc["scaler"] = {{"mean", vector_to_json(bundle.scaler.mean)},
                     {"std_dev", vector_to_json(bundle.scaler.std_dev)}};

    nlohmann::json likelihood = nlohmann::json::array();
    for (int c = 0; c < 2; ++c) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index t = 0; t < bundle.nb.log_likelihood.cols(); ++t)
            row.push_back(format_double(bundle.nb.log_likelihood(c, t)));
        likelihood.push_back(std::move(row));
    }
    doc["nb"] = {{"alpha", format_double(bundle.nb.alpha)},
                 {"log_prior",
                  nlohmann::json::array({format_double(bundle.nb.log_prior[0]),
                                         format_double(bundle.nb.log_prior[1])})},
                 {"log_likelihood", std::move(likelihood)},
                 {"vocab_size", bundle.nb.vocab_size}};

    doc["lr"] = {{"weights", vector_to_json(bundle.lr.weights)},
                 {"bias", format_double(bundle.lr.bias)},
                 {"lambda", format_double(bundle.lr.lambda)},
                 {"seed", bundle.lr.seed}};

    doc["config"] = {{"iterations", bundle.config.iterations},
                     {"pool_size", bundle.config.pool_size},
                     {"add_positive", bundle.config.add_positive},
                     {"add_negative", bundle.config.add_negative},
                     {"min_confidence", format_double(bundle.config.min_confidence)},
                     {"seed", bundle.config.seed}};

    doc["train_log_digest"] = bundle.train_log_digest;
    return doc.dump();
}

namespace {

ModelBundle bundle_from_json(const std::string& body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model body is not valid JSON: ") + e.what());
    }

    ModelBundle bundle;
    try {
        bundle.format_version = doc.at("format_version").get<int>();
        if (bundle.format_version != kModelFormatVersion)
            throw VersionError("model format version " + std::to_string(bundle.format_version) +
                               " is not supported; this reader handles version " +
                               std::to_string(kModelFormatVersion));

        const nlohmann::json& vocab = doc.at("vocabulary");
        for (const auto& [term, index] : vocab.at("term_to_index").items())
            bundle.vocabulary.term_to_index[term] = index.get<int>();
        for (const auto& [term, df] : vocab.at("document_frequency").items())
            bundle.vocabulary.document_frequency[term] = df.get<long>();

        const nlohmann::json& schema = doc.at("schema");
        bundle.schema.version = schema.at("version").get<int>();
        bundle.schema.names = schema.at("names").get<std::vector<std::string>>();
        bundle.schema.sensitive_tokens =
            schema.at("sensitive_tokens").get<std::vector<std::string>>();

        const nlohmann::json& scaler = doc.at("scaler");
        bundle.scaler.mean = vector_from_json(scaler.at("mean"));
        bundle.scaler.std_dev = vector_from_json(scaler.at("std_dev"));

        const nlohmann::json& nb = doc.at("nb");
        bundle.nb.alpha = parse_double(nb.at("alpha").get<std::string>());
        const nlohmann::json& prior = nb.at("log_prior");
        if (!prior.is_array() || prior.size() != 2)
            throw FormatError("naive bayes prior must hold exactly two entries");
        bundle.nb.log_prior[0] = parse_double(prior[0].get<std::string>());
        bundle.nb.log_prior[1] = parse_double(prior[1].get<std::string>());
        const nlohmann::json& likelihood = nb.at("log_likelihood");
        if (!likelihood.is_array() || likelihood.size() != 2)
            throw FormatError("naive bayes likelihood table must hold exactly two rows");
        bundle.nb.vocab_size = nb.at("vocab_size").get<int>();
        bundle.nb.log_likelihood.resize(2, static_cast<Eigen::Index>(likelihood[0].size()));
        for (int c = 0; c < 2; ++c) {
            const nlohmann::json& row = likelihood[c];
            if (!row.is_array() || row.size() != likelihood[0].size())
                throw FormatError("naive bayes likelihood rows differ in length");
            for (std::size_t t = 0; t < row.size(); ++t)
                bundle.nb.log_likelihood(c, static_cast<Eigen::Index>(t)) =
                    parse_double(row[t].get<std::string>());
        }

        const nlohmann::json& lr = doc.at("lr");
        bundle.lr.weights = vector_from_json(lr.at("weights"));
        bundle.lr.bias = parse_double(lr.at("bias").get<std::string>());
        bundle.lr.lambda = parse_double(lr.at("lambda").get<std::string>());
        bundle.lr.seed = lr.at("seed").get<std::uint64_t>();

        const nlohmann::json& config = doc.at("config");
        bundle.config.iterations = config.at("iterations").get<int>();
        bundle.config.pool_size = config.at("pool_size").get<int>();
        bundle.config.add_positive = config.at("add_positive").get<int>();
        bundle.config.add_negative = config.at("add_negative").get<int>();
        bundle.config.min_confidence =
            parse_double(config.at("min_confidence").get<std::string>());
        bundle.config.seed = config.at("seed").get<std::uint64_t>();

        bundle.train_log_digest = doc.at("train_log_digest").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model body is missing or mistypes a field: ") + e.what());
    }

    Validator{bundle}.run();
    return bundle;
}

void append_u64_le(std::string& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((value >> (8 * i)) & 0xFFu));
}

void append_u32_le(std::string& out, std::uint32_t value) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<char>((value >> (8 * i)) & 0xFFu));
}

std::uint64_t read_u64_le(const std::string& bytes, std::size_t offset) {
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i)
        value |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i]))
                 << (8 * i);
    return value;
}

std::uint32_t read_u32_le(const std::string& bytes, std::size_t offset) {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i)
        value |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
                 << (8 * i);
    return value;
}

}  // namespace

void save_model(const ModelBundle& bundle, const std::string& path) {
    Validator{bundle}.run();
    if (bundle.format_version != kModelFormatVersion)
        throw FormatError("save_model only writes format version " +
                          std::to_string(kModelFormatVersion));

    const std::string body = bundle_to_json(bundle);
    std::string blob;
    blob.reserve(body.size() + 16);
    blob.append(kMagic, sizeof kMagic);
    append_u64_le(blob, body.size());
    blob += body;
    append_u32_le(blob, crc32(body));

    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open \"" + temp + "\" for writing");
        out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
        out.flush();
        if (!out)
            throw IoError("failed writing \"" + temp + "\"");
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) {
        std::filesystem::remove(temp);
        throw IoError("cannot move model into place at \"" + path + "\": " + ec.message());
    }
}

ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open \"" + path + "\" for reading");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("failed reading \"" + path + "\"");

    if (bytes.size() < 12 || std::string_view(bytes.data(), 4) != std::string_view(kMagic, 4))
        throw FormatError("\"" + path + "\" is not a PCH1 model file");
    const std::uint64_t body_length = read_u64_le(bytes, 4);
    if (bytes.size() < 12 + body_length + 4)
        throw ChecksumError("\"" + path + "\" is truncated: body or checksum incomplete");
    if (bytes.size() > 12 + body_length + 4)
        throw FormatError("\"" + path + "\" carries trailing bytes after the checksum");

    const std::string body = bytes.substr(12, body_length);
    const std::uint32_t stored = read_u32_le(bytes, 12 + body_length);
    const std::uint32_t actual = crc32(body);
    if (stored != actual)
        throw ChecksumError("\"" + path + "\" failed its checksum: body is corrupt");

    return bundle_from_json(body);
}

}  // namespace secpatch
