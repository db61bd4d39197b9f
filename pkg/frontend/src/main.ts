/** Browser entry point: mount the dashboard on #app against the same
 * origin's API. Serve dist/ from any static host next to the service. */

import { ApiClient } from "./api.js";
import { createApp } from "./app.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("dashboard mount point #app not found");
}
createApp(root, new ApiClient("/api/v1"));
