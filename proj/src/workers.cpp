#include "eqstates/workers.hpp"

#include <cstdlib>
#include <string>

namespace eqs {

WorkerPool WorkerPool::from_env(unsigned fallback)
{
    if (const char* env = std::getenv("EQSTATES_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1 && v <= 1024) {
                return WorkerPool(static_cast<unsigned>(v));
            }
        } catch (const std::exception&) {
        }
    }
    return WorkerPool(fallback);
}

} // namespace eqs
