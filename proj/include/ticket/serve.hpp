#pragma once

#include <cstddef>

#include "ticket/store.hpp"

namespace httplib {
class Server;
}

namespace ticket {

inline constexpr std::size_t kMaxRequestBytes = 64 * 1024;

// Binds POST /classify and GET /health onto the server and caps request
// bodies at kMaxRequestBytes (larger bodies get 413). The artifact must
// outlive the server. Classification is read-only, so concurrent requests
// share the artifact without locking.
void configure_classify_routes(httplib::Server& server, const PipelineArtifact& artifact);

}  // namespace ticket
