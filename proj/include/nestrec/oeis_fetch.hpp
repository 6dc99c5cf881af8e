#pragma once
// Download OEIS b-files over HTTP(S), with a per-id on-disk cache.
// Targets including this header must link OpenSSL (see the nestrec_fetch CMake target).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <httplib.h>

#include "nestrec/oeis.hpp"

namespace nestrec::oeis {

class NetworkError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class HttpStatus : public std::runtime_error
{
public:
    HttpStatus(int code, const std::string& url)
        : std::runtime_error("HTTP " + std::to_string(code) + " for " + url), code_(code)
    {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

class CacheWriteError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kBaseUrlEnv = "NESTREC_OEIS_BASE_URL";
inline constexpr const char* kDefaultBaseUrl = "https://oeis.org";

/// "{base}/{id}/b{digits}.txt", with base taken from NESTREC_OEIS_BASE_URL when set.
inline std::string default_url_template()
{
    std::string base = kDefaultBaseUrl;
    if (const char* env = std::getenv(kBaseUrlEnv); env != nullptr && *env != '\0')
        base = env;
    while (!base.empty() && base.back() == '/')
        base.pop_back();
    return base + "/{id}/b{digits}.txt";
}

/// $XDG_CACHE_HOME/nestrec/oeis, falling back to ~/.cache/nestrec/oeis.
inline std::filesystem::path default_cache_dir()
{
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0')
        return std::filesystem::path(xdg) / "nestrec" / "oeis";
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0')
        return std::filesystem::path(home) / ".cache" / "nestrec" / "oeis";
    return std::filesystem::temp_directory_path() / "nestrec-oeis";
}

inline std::string expand_url(std::string url_template, const std::string& id)
{
    require_valid_id(id);
    auto replace_all = [&](const std::string& key, const std::string& value) {
        for (std::size_t pos; (pos = url_template.find(key)) != std::string::npos;)
            url_template.replace(pos, key.size(), value);
    };
    replace_all("{id}", id);
    replace_all("{digits}", id.substr(1));
    return url_template;
}

struct FetchOptions
{
    std::string url_template = default_url_template();
    std::filesystem::path cache_dir = default_cache_dir();
    bool allow_network = false;
    int timeout_seconds = 30;
};

struct FetchResult
{
    std::string bytes;
    bool from_cache = false;
    std::filesystem::path cache_path;
};

namespace detail {

// Holds an exclusive flock on <dir>/<id>.lock for the lifetime of the object.
class CacheLock
{
public:
    explicit CacheLock(const std::filesystem::path& lock_path)
    {
        fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0)
            throw CacheWriteError("cannot open cache lock " + lock_path.string());
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw CacheWriteError("cannot lock " + lock_path.string());
        }
    }
    ~CacheLock()
    {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    CacheLock(const CacheLock&) = delete;
    CacheLock& operator=(const CacheLock&) = delete;

private:
    int fd_ = -1;
};

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string http_get(const std::string& url, int timeout_seconds)
{
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw NetworkError("URL without scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    if (!client.is_valid())
        throw NetworkError("unsupported URL: " + url);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    auto res = client.Get(path);
    if (!res)
        throw NetworkError("GET " + url + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw HttpStatus(res->status, url);
    return res->body;
}

}  // namespace detail

/// Return the raw b-file for `id`, from the cache when present; otherwise
/// download it (only if allow_network) and store it in the cache.
inline FetchResult fetch_bfile(const std::string& id, const FetchOptions& options)
{
    require_valid_id(id);
    std::error_code ec;
    std::filesystem::create_directories(options.cache_dir, ec);
    if (ec)
        throw CacheWriteError("cannot create cache directory " + options.cache_dir.string() + ": " + ec.message());

    const auto cache_path = options.cache_dir / ("b" + id.substr(1) + ".txt");
    detail::CacheLock lock(options.cache_dir / (id + ".lock"));

    if (std::filesystem::exists(cache_path))
        return FetchResult{detail::read_file(cache_path), true, cache_path};
    if (!options.allow_network)
        throw NetworkError(id + " is not cached and network access is disabled");

    std::string bytes = detail::http_get(expand_url(options.url_template, id), options.timeout_seconds);

    const auto tmp = cache_path.string() + ".part";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << bytes;
        if (!out)
            throw CacheWriteError("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, cache_path, ec);
    if (ec)
        throw CacheWriteError("cannot move " + tmp + " into place: " + ec.message());
    return FetchResult{std::move(bytes), false, cache_path};
}

}  // namespace nestrec::oeis
